"""Trainer for hybrid-lookup-table super-resolution models.

Trains per-table surrogate CNNs with a float forward pass that mirrors the
integer inference engine, exports quantized ``.hklut`` files, verifies
float/integer consistency, and renders effective-receptive-field maps.
"""

from .erf import compute_erf, effective_radius, support_bound
from .export import export_lut, export_model, quantize, verify_export
from .floatmodel import FloatModel, FloatStage, upsample_float
from .net import SurrogateNet
from .train import (TrainConfig, TrainDivergence, load_checkpoint,
                    load_hr_images, save_checkpoint, train)

__all__ = [
    "SurrogateNet", "FloatModel", "FloatStage", "upsample_float",
    "TrainConfig", "TrainDivergence", "train", "load_hr_images",
    "save_checkpoint", "load_checkpoint",
    "export_lut", "export_model", "quantize", "verify_export",
    "compute_erf", "effective_radius", "support_bound",
]
