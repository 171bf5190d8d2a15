"""Op counting, energy estimation and runtime benchmarking."""

import numpy as np
import pytest

from hklut.bench import (EnergyCosts, OpCounts, bench_runtime, estimate_ops,
                         estimate_ops_interp_reference)
from hklut.model import ModelSpec, preset_model
from hklut.verify import random_model


def test_empty_model_counts_zero():
    ops = estimate_ops(ModelSpec(stages=()), 720, 1280)
    assert ops == OpCounts()
    assert ops.energy_pj() == 0.0


def test_hklut_s_lookup_counts():
    ops = estimate_ops(preset_model("hklut-s"), 360 * 4, 640 * 4)
    stage1 = 640 * 360 * (3 + 2) * 4
    stage2 = 1280 * 720 * (3 + 2) * 4
    assert stage1 == 4_608_000 and stage2 == 18_432_000
    assert ops.lookups == stage1 + stage2


def test_zero_float_ops_for_lut_models():
    rng = np.random.default_rng(0)
    for _ in range(5):
        model = random_model(rng)
        scale = model.total_upscale
        ops = estimate_ops(model, 8 * scale, 8 * scale)
        assert ops.float_ops == 0


def test_linear_in_output_pixels():
    model = preset_model("hklut-l")
    a = estimate_ops(model, 4 * 16, 4 * 16)
    b = estimate_ops(model, 4 * 32, 4 * 16)
    assert b.lookups == 2 * a.lookups
    assert b.int32_adds == 2 * a.int32_adds
    assert b.int8_adds == 2 * a.int8_adds


def test_energy_below_interpolated_reference():
    out_h, out_w = 720, 1280
    lut = estimate_ops(preset_model("hklut-s"), out_h, out_w)
    ref = estimate_ops_interp_reference(out_h, out_w, r=4, n=4)
    assert lut.energy_pj() < ref.energy_pj()
    assert ref.float_ops > 0 and lut.float_ops == 0


def test_energy_cost_override(tmp_path):
    cfg = tmp_path / "energy.toml"
    cfg.write_text("[energy]\nint32_add = 0.5\nlookup = 0.2\n")
    costs = EnergyCosts.from_toml(cfg)
    assert costs.int32_add == 0.5 and costs.lookup == 0.2
    assert costs.float32_mult == 3.7  # untouched default


def test_energy_cost_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "energy.toml"
    cfg.write_text("[energy]\nwarp_drive = 1.0\n")
    with pytest.raises(ValueError):
        EnergyCosts.from_toml(cfg)


def test_bench_runtime_stats():
    model = preset_model("hklut-s")
    mean, std, samples = bench_runtime(model, 16, 16, repeats=3)
    assert len(samples) == 3
    assert mean > 0 and std >= 0


def test_bench_runtime_rejects_zero_repeats():
    with pytest.raises(ValueError):
        bench_runtime(preset_model("hklut-s"), 8, 8, repeats=0)
