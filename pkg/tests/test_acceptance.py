"""Acceptance suite: one test per release criterion, one printed line each.

The classical-baseline criterion needs the Set5 benchmark with its official
LR inputs under ``$HKLUT_DATASETS/Set5`` (layout ``HR/`` plus
``LR_bicubic/X4/``).  Without it that test is skipped, loudly: synthetic LR
cannot stand in for the official degradations.
"""

import os
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from hklut.bench import estimate_ops, estimate_ops_interp_reference
from hklut.cli import main as cli_main
from hklut.data import index_dataset, write_png
from hklut.engine import model_forward
from hklut.evaluate import evaluate_dataset
from hklut.fileformat import save_model_file
from hklut.model import (ModelSpec, builtin_pattern, lut_size_bytes, make_stage,
                         preset_model, rotate_pattern, zero_table)
from hklut.reference import build_lut_from_function, lookup, reference_forward
from hklut.resample import upsample_plane
from hklut.verify import random_image, random_model


def _report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f"  ({detail})" if detail else ""
    print(f"ACCEPTANCE {status}: {name}{suffix}")
    assert ok, f"{name}{suffix}"


HD = ("H", "D")
HDB = ("HDB_A", "HDB_B", "HDB_C")


def _asym(msb, lsb, upscales, v=16):
    return ModelSpec(stages=tuple(make_stage(r, v=v, msb_kernels=msb,
                                             lsb_kernels=lsb) for r in upscales))


def test_storage_accounting_exact():
    expected = {
        # single tables
        lut_size_bytes(zero_table(17, 4, 4)): 1_336_336,      # 1.27 MB
        lut_size_bytes(zero_table(17, 3, 4)): 78_608,         # 76.77 KB
        2 * lut_size_bytes(zero_table(17, 2, 4)): 9_248,      # 9.03 KB
        # branch pairings at x4
        lut_size_bytes(_asym(HD, HD, (4,))): 16_384,          # 16 KB
        lut_size_bytes(_asym(HD, HDB, (4,))): 204_800,        # 200 KB
        lut_size_bytes(_asym(HDB, HD, (4,))): 204_800,        # 200 KB
        lut_size_bytes(_asym(HDB, HDB, (4,))): 393_216,       # 384 KB
        # progressive upsampling
        lut_size_bytes(_asym(HDB, HD, (1, 4))): 217_600,      # ~213 KB
        lut_size_bytes(_asym(HDB, HD, (2, 2))): 102_400,      # 100 KB
        lut_size_bytes(_asym(HDB, HD, (2, 1, 2))): 115_200,   # 112.5 KB
        # released shapes
        lut_size_bytes(preset_model("hklut-s")): 102_400,
        lut_size_bytes(preset_model("hklut-l")): 115_200,
    }
    bad = {got: want for got, want in expected.items() if got != want}
    _report("storage accounting (0-byte tolerance)", not bad, str(bad))


def test_oracle_equivalence_100_pairs():
    rng = np.random.default_rng(42)
    cases = [np.array([[17]], dtype=np.uint8),
             rng.integers(0, 256, size=(1, 9), dtype=np.uint8),
             rng.integers(0, 256, size=(9, 1), dtype=np.uint8),
             rng.integers(0, 256, size=(7, 13), dtype=np.uint8)]
    cases += [random_image(rng, 16) for _ in range(96)]
    mismatches = 0
    for img in cases:
        model = random_model(rng, max_stages=2)
        if not np.array_equal(model_forward(img, model),
                              reference_forward(img, model)):
            mismatches += 1
    _report(f"oracle equivalence on {len(cases)} randomized pairs",
            mismatches == 0, f"{mismatches} mismatches")


def test_exhaustive_lut_correctness():
    import itertools

    def f2(t):
        return np.full((2, 2), max(-127, min(127, 3 * t[0] - 2 * t[1] - 10)))

    def f3(t):
        return np.array([[t[0] - t[1], t[2]], [-t[2], (t[0] * t[1]) % 100]])

    t2 = build_lut_from_function(f2, 16, 2, 2)
    t3 = build_lut_from_function(f3, 16, 3, 2)
    bad = sum(not np.array_equal(lookup(t2, t), f2(t))
              for t in itertools.product(range(16), repeat=2))
    bad += sum(not np.array_equal(lookup(t3, t), f3(t))
               for t in itertools.product(range(16), repeat=3))
    _report("exhaustive LUT build/lookup (256 + 4096 inputs)", bad == 0, f"{bad} bad")


def test_zero_lut_neutrality_20_images():
    rng = np.random.default_rng(7)
    model = preset_model("hklut-s")
    bad = 0
    for _ in range(20):
        img = random_image(rng, 20)
        if not np.array_equal(model_forward(img, model),
                              upsample_plane(img, 4, "nearest")):
            bad += 1
    _report("zero-LUT model == nearest x4 on 20 images", bad == 0, f"{bad} bad")


def test_rotation_equivariance_20_pairs():
    rng = np.random.default_rng(11)
    bad = 0
    for _ in range(20):
        model = random_model(rng, max_stages=2)
        img = random_image(rng, 14)
        out = model_forward(img, model)
        for k in range(1, 4):
            if not np.array_equal(model_forward(np.rot90(img, k).copy(), model),
                                  np.rot90(out, k)):
                bad += 1
    _report("rotation equivariance on 20 (model, image) pairs", bad == 0, f"{bad} bad")


def test_kernel_coverage_exact():
    def union(names):
        cells = []
        for name in names:
            p = builtin_pattern(name)
            for j in range(4):
                cells.extend(o for o in rotate_pattern(p, j).offsets if o != (0, 0))
        return cells

    def window(rad):
        return {(dy, dx) for dy in range(-rad, rad + 1)
                for dx in range(-rad, rad + 1)} - {(0, 0)}

    ok = True
    for names, rad in ((HD, 1), (("L",), 1), (HDB, 2)):
        cells = union(names)
        ok &= len(cells) == len(set(cells)) and set(cells) == window(rad)
    _report("kernel rotation coverage tiles 3x3 / 3x3 / 5x5 exactly", ok)


def _set5_dir():
    root = os.environ.get("HKLUT_DATASETS", "datasets")
    for name in ("Set5", "set5"):
        d = Path(root) / name
        if (d / "HR").is_dir():
            return d
    return None


def test_classical_baselines_set5():
    set5 = _set5_dir()
    if set5 is None:
        pytest.skip("Set5 with official LR inputs not available "
                    "(set $HKLUT_DATASETS); criterion cannot run offline")
    index = index_dataset(set5, 4)
    targets = {"nearest": 26.25, "bilinear": 27.55, "bicubic": 28.42}
    ok = True
    details = []
    for method, target in targets.items():
        report = evaluate_dataset(index, method)
        details.append(f"{method} {report.mean_psnr:.2f} dB (target {target})")
        ok &= abs(report.mean_psnr - target) <= 0.15
        if method == "bicubic":
            details.append(f"ssim {report.mean_ssim:.3f} (target 0.810)")
            ok &= abs(report.mean_ssim - 0.810) <= 0.01
    _report("Set5 x4 classical baselines", ok, "; ".join(details))


def test_integer_only_and_energy_ordering():
    model = preset_model("hklut-s")
    ops = estimate_ops(model, 1440, 2560)
    ref = estimate_ops_interp_reference(1440, 2560, r=4, n=4)
    ok = ops.float_ops == 0 and ops.energy_pj() < ref.energy_pj()
    _report("integer-only pipeline, energy below interpolated 4-pixel reference",
            ok, f"{ops.energy_pj():.2e} pJ < {ref.energy_pj():.2e} pJ, "
                f"float ops {ops.float_ops}")


def test_upscale_determinism_across_threads(tmp_path):
    runner = CliRunner()
    rng = np.random.default_rng(3)
    model_path = tmp_path / "m.hklut"
    save_model_file(random_model(rng, max_stages=2), model_path)
    srcs = []
    for i in range(5):
        img = rng.integers(0, 256, size=(24 + i, 19, 3), dtype=np.uint8)
        path = tmp_path / f"i{i}.png"
        write_png(img, path)
        srcs.append(str(path))
    digests = []
    for threads in (1, 2, os.cpu_count() or 4):
        out = tmp_path / f"o{threads}"
        res = runner.invoke(cli_main, ["upscale", str(model_path), *srcs,
                                       "-o", str(out), "--threads", str(threads)],
                            catch_exceptions=False)
        assert res.exit_code == 0
        digests.append(tuple((out / f"i{i}.png").read_bytes() for i in range(5)))
    _report("upscale output independent of thread count {1, 2, max}",
            len(set(digests)) == 1)
