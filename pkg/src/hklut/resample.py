"""Separable image resampling.

Integer-factor upscaling (nearest / bilinear / bicubic) runs in exact
integer arithmetic: with half-pixel-center alignment every tap weight is a
rational with denominator 2r (bilinear) or 16r^3 (bicubic, Keys a=-0.5),
so sums are accumulated in int64 and rounded once.  This keeps the
upsamplers bit-deterministic and exactly equivariant under 90-degree
rotation, which the LUT engine's residual path relies on.

Downscaling (for LR fixture generation) uses an antialiased Keys kernel
stretched by the scale factor, computed in float64.
"""

from __future__ import annotations

import numpy as np


def _keys(t: np.ndarray, a: float = -0.5) -> np.ndarray:
    """Keys cubic convolution kernel."""
    t = np.abs(t)
    out = np.zeros_like(t)
    m1 = t <= 1
    out[m1] = (a + 2) * t[m1] ** 3 - (a + 3) * t[m1] ** 2 + 1
    m2 = (t > 1) & (t < 2)
    out[m2] = a * (t[m2] ** 3 - 5 * t[m2] ** 2 + 8 * t[m2] - 4)
    return out


def _int_phase_taps(mode: str, r: int):
    """Per-phase (tap offsets, integer weights) and the common denominator.

    Phase p of an r-fold upscale samples source coordinate
    f = (p + 0.5)/r - 0.5 relative to the base pixel.
    """
    taps = []
    if mode == "bilinear":
        denom = 2 * r
        for p in range(r):
            # f = (2p + 1 - r) / (2r); weights (1 - frac, frac) over floor(f), floor(f)+1
            num = 2 * p + 1 - r  # f * 2r
            base = num // denom  # floor(f)
            frac = num - base * denom  # f - floor(f), times 2r
            taps.append(((base, base + 1), (denom - frac, frac)))
    elif mode == "bicubic":
        denom = 16 * r ** 3
        for p in range(r):
            f = (2 * p + 1 - r) / (2 * r)
            base = int(np.floor(f))
            ks = tuple(range(base - 1, base + 3))
            ws = []
            for k in ks:
                w = _keys(np.array([f - k]))[0]
                wi = round(w * denom)
                ws.append(int(wi))
            # Keys reproduces constants exactly; the scaled weights must too.
            assert sum(ws) == denom
            taps.append((ks, tuple(ws)))
    else:
        raise ValueError(f"unsupported interpolation mode {mode!r}")
    return taps, denom


def _div_round_nonneg_away(num: np.ndarray, denom: int) -> np.ndarray:
    """Round num/denom half away from zero (num may be negative)."""
    num = np.asarray(num)
    pos = (2 * num + denom) // (2 * denom)
    neg = -((-2 * num + denom) // (2 * denom))
    return np.where(num >= 0, pos, neg)


def _upsample_axis_int(img: np.ndarray, r: int, mode: str, axis: int) -> np.ndarray:
    """Integer-weight upscale along one axis; result scaled by the denominator."""
    taps, _ = _int_phase_taps(mode, r)
    img = np.moveaxis(img, axis, 0)
    size = img.shape[0]
    out = np.empty((size * r,) + img.shape[1:], dtype=np.int64)
    base_idx = np.arange(size)
    for p, (ks, ws) in enumerate(taps):
        acc = np.zeros((size,) + img.shape[1:], dtype=np.int64)
        for k, w in zip(ks, ws):
            if w == 0:
                continue
            src = np.clip(base_idx + k, 0, size - 1)
            acc += w * img[src]
        out[p::r] = acc
    return np.moveaxis(out, 0, axis)


def upsample_plane(img: np.ndarray, r: int, mode: str = "nearest") -> np.ndarray:
    """Upscale a uint8 plane by integer factor r, half-pixel centers, edge clamp."""
    if r < 1:
        raise ValueError(f"upscale factor must be >= 1, got {r}")
    img = np.asarray(img, dtype=np.uint8)
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D plane, got shape {img.shape}")
    if r == 1:
        return img.copy()
    if mode == "nearest":
        return np.repeat(np.repeat(img, r, axis=0), r, axis=1)
    _, denom = _int_phase_taps(mode, r)
    acc = _upsample_axis_int(img.astype(np.int64), r, mode, axis=0)
    acc = _upsample_axis_int(acc, r, mode, axis=1)
    out = _div_round_nonneg_away(acc, denom * denom)
    return np.clip(out, 0, 255).astype(np.uint8)


def downscale_antialiased(img: np.ndarray, scale: int) -> np.ndarray:
    """Antialiased bicubic downscale by an integer factor (Keys kernel
    stretched by the factor).  Output dims are ceil(input / scale); edges clamp.
    Returns uint8, rounded to nearest.
    """
    if scale < 1:
        raise ValueError(f"scale must be >= 1, got {scale}")
    arr = np.asarray(img, dtype=np.float64)
    if scale == 1:
        return np.asarray(img, dtype=np.uint8).copy()
    for axis in range(2):
        arr = _downscale_axis(arr, scale, axis)
    return np.clip(np.floor(arr + 0.5), 0, 255).astype(np.uint8)


def _downscale_axis(arr: np.ndarray, scale: int, axis: int) -> np.ndarray:
    arr = np.moveaxis(arr, axis, 0)
    size = arr.shape[0]
    out_size = -(-size // scale)
    support = 2 * scale
    out = np.zeros((out_size,) + arr.shape[1:], dtype=np.float64)
    for o in range(out_size):
        center = (o + 0.5) * scale - 0.5
        lo = int(np.floor(center)) - support + 1
        ks = np.arange(lo, lo + 2 * support)
        ws = _keys((ks - center) / scale)
        ws /= ws.sum()
        src = np.clip(ks, 0, size - 1)
        out[o] = np.tensordot(ws, arr[src], axes=(0, 0))
    return np.moveaxis(out, 0, axis)
