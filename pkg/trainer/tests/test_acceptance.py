"""Trainer release criteria, one printed line each.

The learning-signal criterion compares a briefly trained, exported model
against the bilinear baseline on Set5 x4 through the integer engine; it
needs that dataset under $HKLUT_DATASETS and skips loudly without it.
"""

import os
from pathlib import Path

import numpy as np
import pytest
import torch

from hklut_trainer import (FloatModel, TrainConfig, compute_erf,
                           effective_radius, export_model, support_bound,
                           train, verify_export)


def _report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE {status}: {name}{suffix}")
    assert ok, f"{name}{suffix}"


def test_export_consistency(tmp_path, desk_trained):
    rng = np.random.default_rng(0)
    imgs = [rng.integers(0, 256, size=(14, 14), dtype=np.uint8)
            for _ in range(20)]
    torch.manual_seed(9)
    worst = 0
    for tag, model in (("random-init", FloatModel("hklut-s")),
                       ("desk-trained", desk_trained[0])):
        path = tmp_path / f"{tag}.hklut"
        export_model(model, path)
        export_model(model, tmp_path / "again.hklut")
        reproducible = path.read_bytes() == (tmp_path / "again.hklut").read_bytes()
        devs = verify_export(model, path, imgs)
        worst = max(worst, max(devs))
        if not reproducible or max(devs) > 3:
            _report("export consistency", False, f"{tag}: devs {devs}")
    _report("export consistency (<= 3 gray levels/stage, byte-reproducible)",
            True, f"worst per-stage deviation {worst}")


def test_desk_scale_learning_signal(tmp_path):
    root = os.environ.get("HKLUT_DATASETS", "datasets")
    set5 = next((Path(root) / n for n in ("Set5", "set5")
                 if (Path(root) / n / "HR").is_dir()), None)
    if set5 is None:
        pytest.skip("Set5 not available (set $HKLUT_DATASETS); "
                    "learning-signal criterion cannot run offline")
    from hklut.data import index_dataset
    from hklut.evaluate import evaluate_dataset
    from hklut.fileformat import load_model_file
    from hklut_trainer.train import load_hr_images

    planes = load_hr_images(set5)
    cfg = TrainConfig.desk_scale(seed=0)
    model, _ = train(cfg, planes)
    path = tmp_path / "trained.hklut"
    export_model(model, path)
    index = index_dataset(set5, 4)
    trained = evaluate_dataset(index, load_model_file(path)).mean_psnr
    bilinear = evaluate_dataset(index, "bilinear").mean_psnr
    _report("desk-scale training beats bilinear by >= 0.2 dB",
            trained >= bilinear + 0.2,
            f"trained {trained:.2f} dB vs bilinear {bilinear:.2f} dB")


def test_erf_sanity(desk_trained):
    model, _ = desk_trained
    stage = model.stages[0]
    rng = np.random.default_rng(4)
    plane = rng.integers(0, 16, (18, 18))
    region = (16, 16, 4)
    maps = {}
    inside = True
    for tag, nets, names in (("msb", stage.msb_nets, stage.msb_names),
                             ("lsb", stage.lsb_nets, stage.lsb_names)):
        erf = compute_erf(nets, names, plane, region, stage.r)
        inside &= not erf[~support_bound(names, plane.shape, region, stage.r)].any()
        maps[tag] = effective_radius(erf)
    _report("ERF within receptive-field bound, MSB radius >= LSB radius",
            inside and maps["msb"] >= maps["lsb"],
            f"msb {maps['msb']:.2f} px, lsb {maps['lsb']:.2f} px")
