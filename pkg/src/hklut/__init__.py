"""Integer lookup-table super-resolution: asymmetric nibble branches,
minimal-pixel rotation-ensemble kernels, multistage progressive upsampling."""

from .engine import model_forward, split_nibbles, stage_forward
from .fileformat import load_model_file, save_model_file
from .model import (BranchSpec, KernelPattern, LutTable, ModelSpec, StageSpec,
                    builtin_pattern, lut_size_bytes, preset_model, rotate_pattern)
from .resample import upsample_plane

__all__ = [
    "BranchSpec", "KernelPattern", "LutTable", "ModelSpec", "StageSpec",
    "builtin_pattern", "rotate_pattern", "preset_model", "lut_size_bytes",
    "model_forward", "stage_forward", "split_nibbles",
    "save_model_file", "load_model_file", "upsample_plane",
]

__version__ = "0.1.0"
