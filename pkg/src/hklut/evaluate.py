"""Dataset evaluation: run a model or classical baseline over HR/LR pairs."""

from __future__ import annotations

import numpy as np

from .bench import EvalReport
from .data import DatasetIndex, check_pair_dims, read_png
from .engine import model_forward_tiled
from .metrics import classical_upscale, psnr, ssim, to_luma
from .model import ModelSpec

CLASSICAL_METHODS = ("nearest", "bilinear", "bicubic")


def upscale_image(img: np.ndarray, method, scale: int, threads: int = 1) -> np.ndarray:
    """Upscale an RGB image or plane with a classical method or a ModelSpec."""
    if isinstance(method, ModelSpec):
        if method.total_upscale != scale:
            raise ValueError(f"model upscales x{method.total_upscale}, requested x{scale}")
        if img.ndim == 3:
            return np.stack([model_forward_tiled(img[..., c], method, threads)
                             for c in range(img.shape[2])], axis=-1)
        return model_forward_tiled(img, method, threads)
    if method not in CLASSICAL_METHODS:
        raise ValueError(f"unknown method {method!r}")
    return classical_upscale(img, scale, method)


def _crop_to_scale(img: np.ndarray, scale: int) -> np.ndarray:
    h = img.shape[0] - img.shape[0] % scale
    w = img.shape[1] - img.shape[1] % scale
    return img[:h, :w]


def evaluate_dataset(index: DatasetIndex, method, shave: int | None = None,
                     threads: int = 1, lr_source: str = "official") -> EvalReport:
    """PSNR/SSIM on the luma channel, borders shaved by the upscale factor."""
    scale = index.scale
    if shave is None:
        shave = scale
    name = method if isinstance(method, str) else "model"
    report = EvalReport(dataset=index.name, method=name, scale=scale,
                        lr_source=lr_source)
    for hr_path, lr_path in index.records:
        hr = read_png(hr_path)
        lr = read_png(lr_path)
        if not check_pair_dims(hr.shape, lr.shape, scale):
            raise ValueError(f"{lr_path.name}: LR dims {lr.shape[:2]} do not match "
                             f"ceil({hr.shape[:2]} / {scale})")
        sr = upscale_image(lr, method, scale, threads)
        hr = _crop_to_scale(hr, scale)
        hr_y = to_luma(hr)
        sr_y = to_luma(sr[:hr_y.shape[0], :hr_y.shape[1]])
        report.per_image.append((hr_path.stem,
                                 psnr(hr_y, sr_y, shave),
                                 ssim(hr_y, sr_y, shave)))
    return report
