"""Fidelity metrics and classical interpolation baselines.

PSNR/SSIM follow the standard SISR protocol: metrics on the luma channel
with a border shave equal to the upscale factor.  SSIM is the single-scale
Wang et al. formulation (11x11 Gaussian window, sigma 1.5,
C1=(0.01*255)^2, C2=(0.03*255)^2, mean over valid window positions).
"""

from __future__ import annotations

import numpy as np
from scipy.signal import convolve2d

from .resample import upsample_plane


def _shaved_pair(a, b, shave: int):
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    if shave < 0:
        raise ValueError("shave must be >= 0")
    if shave:
        if 2 * shave >= min(a.shape[:2]):
            raise ValueError(f"shave {shave} leaves no pixels for {a.shape}")
        a = a[shave:-shave, shave:-shave]
        b = b[shave:-shave, shave:-shave]
    return a.astype(np.float64), b.astype(np.float64)


def psnr(a, b, shave: int = 0) -> float:
    """Peak signal-to-noise ratio in dB over 8-bit range; inf if identical."""
    a, b = _shaved_pair(a, b, shave)
    mse = np.mean((a - b) ** 2)
    if mse == 0:
        return float("inf")
    return 10.0 * np.log10(255.0 ** 2 / mse)


def _gaussian_window(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    ax = np.arange(size) - (size - 1) / 2.0
    g = np.exp(-(ax ** 2) / (2 * sigma ** 2))
    win = np.outer(g, g)
    return win / win.sum()


def ssim(a, b, shave: int = 0) -> float:
    """Mean single-scale SSIM over valid 11x11 window positions."""
    a, b = _shaved_pair(a, b, shave)
    win = _gaussian_window()
    if min(a.shape) < win.shape[0]:
        raise ValueError(f"image too small for the 11x11 SSIM window: {a.shape}")
    c1 = (0.01 * 255) ** 2
    c2 = (0.03 * 255) ** 2
    mu_a = convolve2d(a, win, mode="valid")
    mu_b = convolve2d(b, win, mode="valid")
    var_a = convolve2d(a * a, win, mode="valid") - mu_a ** 2
    var_b = convolve2d(b * b, win, mode="valid") - mu_b ** 2
    cov = convolve2d(a * b, win, mode="valid") - mu_a * mu_b
    num = (2 * mu_a * mu_b + c1) * (2 * cov + c2)
    den = (mu_a ** 2 + mu_b ** 2 + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def to_luma(rgb) -> np.ndarray:
    """ITU-R BT.601 studio-swing luma of an 8-bit RGB image."""
    arr = np.asarray(rgb)
    if arr.ndim == 2:
        # already a single plane; evaluate as gray = R = G = B
        arr = np.stack([arr] * 3, axis=-1)
    if arr.ndim != 3 or arr.shape[2] < 3:
        raise ValueError(f"expected an RGB image, got shape {arr.shape}")
    r, g, b = (arr[..., i].astype(np.float64) for i in range(3))
    y = 16.0 + (65.738 * r + 129.057 * g + 25.064 * b) / 256.0
    return np.clip(np.floor(y + 0.5), 0, 255).astype(np.uint8)


def rgb_to_ycbcr(rgb) -> np.ndarray:
    """8-bit RGB to studio-swing BT.601 YCbCr (HxWx3 uint8)."""
    arr = np.asarray(rgb, dtype=np.float64)
    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    y = 16.0 + (65.738 * r + 129.057 * g + 25.064 * b) / 256.0
    cb = 128.0 + (-37.945 * r - 74.494 * g + 112.439 * b) / 256.0
    cr = 128.0 + (112.439 * r - 94.154 * g - 18.285 * b) / 256.0
    out = np.stack([y, cb, cr], axis=-1)
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


def ycbcr_to_rgb(ycbcr) -> np.ndarray:
    """Inverse of rgb_to_ycbcr, clamped to 8-bit."""
    arr = np.asarray(ycbcr, dtype=np.float64)
    y, cb, cr = arr[..., 0], arr[..., 1], arr[..., 2]
    r = (298.082 * y + 408.583 * cr) / 256.0 - 222.921
    g = (298.082 * y - 100.291 * cb - 208.120 * cr) / 256.0 + 135.576
    b = (298.082 * y + 516.412 * cb) / 256.0 - 276.836
    out = np.stack([r, g, b], axis=-1)
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


def classical_upscale(img, r: int, method: str = "bicubic") -> np.ndarray:
    """Nearest / bilinear / bicubic upscale of a plane or RGB image."""
    arr = np.asarray(img, dtype=np.uint8)
    if arr.ndim == 3:
        return np.stack([upsample_plane(arr[..., c], r, method)
                         for c in range(arr.shape[2])], axis=-1)
    return upsample_plane(arr, r, method)
