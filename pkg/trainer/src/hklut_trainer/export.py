"""Quantized export of trained surrogate nets and float/integer consistency checks."""

import numpy as np
import torch

from .patterns import NIBBLE_LEVELS, PATTERNS, lut_order_tuples, write_model


def quantize(values):
    """FP32 in [-1, 1] -> int8 table entries: floor(value * 127), clamped."""
    return np.clip(np.floor(np.asarray(values, dtype=np.float64) * 127.0),
                   -127, 127).astype(np.int8)


@torch.no_grad()
def export_lut(net, kernel_name, r):
    """Enumerate all nibble tuples through the net; entries in table-index order."""
    net.eval()
    k = len(PATTERNS[kernel_name])
    tuples = lut_order_tuples(NIBBLE_LEVELS, k)
    inputs = torch.tensor(tuples, dtype=torch.float32).view(-1, k, 1, 1) / 15.0
    out = net(inputs).view(len(tuples), r * r).numpy()
    return quantize(out).reshape(-1)


def export_model(model, path):
    """Write a FloatModel as a .hklut file consumable by the inference engine."""
    stages = []
    for stage in model.stages:
        msb = [export_lut(net, name, stage.r)
               for net, name in zip(stage.msb_nets, stage.msb_names)]
        lsb = [export_lut(net, name, stage.r)
               for net, name in zip(stage.lsb_nets, stage.lsb_names)]
        stages.append({"r": stage.r, "residual_mode": stage.residual_mode,
                       "branches": [(stage.msb_names, msb),
                                    (stage.lsb_names, lsb)]})
    write_model(path, stages)


@torch.no_grad()
def verify_export(model, path, images):
    """Max |float forward - exported integer forward| per stage.

    Each stage of the engine model loaded from ``path`` and the matching
    float stage are fed the same integer stage input (the engine's), so the
    reported deviations do not compound across stages.
    """
    from hklut import load_model_file, stage_forward

    engine_model = load_model_file(path)
    model.eval()
    deviations = [0] * len(model.stages)
    for img in images:
        plane = np.asarray(img, dtype=np.uint8)
        for i, (fstage, estage) in enumerate(zip(model.stages,
                                                 engine_model.stages)):
            engine_out = stage_forward(plane, estage)
            x = torch.tensor(plane, dtype=torch.float32)[None, None]
            float_out = fstage(x)[0, 0].numpy()
            dev = int(np.abs(float_out - engine_out.astype(np.float64)).max())
            deviations[i] = max(deviations[i], dev)
            plane = engine_out
    return deviations
