"""Integer LUT inference engine.

The forward pass is pure integer arithmetic: nibble split, per-kernel
rotation-ensemble lookups accumulated in int32, one round-half-away-from-
zero division per branch, residual add, clamp.  Rounding happens only
after the complete rotation sum, which makes the whole pipeline exactly
equivariant under 90-degree input rotation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .model import BranchSpec, KernelPattern, LutTable, ModelSpec, StageSpec, rotate_pattern
from .resample import upsample_plane

# All built-in patterns fit a 5x5 window, so a 2-pixel replicate pad
# realizes clamp-to-edge sampling for every rotation.
_PAD = 2


def as_plane(img) -> np.ndarray:
    """Validate and return a 2-D uint8 image plane."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D plane, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if arr.min() < 0 or arr.max() > 255:
            raise ValueError("plane values must fit in uint8")
        arr = arr.astype(np.uint8)
    return arr


def split_nibbles(img: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """High and low 4-bit planes of an 8-bit image, each in [0, 15]."""
    img = as_plane(img)
    return img >> 4, img & 0x0F


def gather_tuple(plane: np.ndarray, pattern: KernelPattern, y: int, x: int) -> tuple[int, ...]:
    """Plane values at (y+dy, x+dx) in pattern order, clamped to the edges."""
    plane = as_plane(plane)
    h, w = plane.shape
    if not (0 <= y < h and 0 <= x < w):
        raise IndexError(f"pivot ({y}, {x}) outside {h}x{w} plane")
    return tuple(int(plane[min(max(y + dy, 0), h - 1), min(max(x + dx, 0), w - 1)])
                 for dy, dx in pattern.offsets)


def lut_index(values, v: int) -> int:
    """Base-v positional index of an input tuple, first element most significant."""
    idx = 0
    for val in values:
        if not 0 <= val < v:
            raise ValueError(f"tuple value {val} outside [0, {v})")
        idx = idx * v + int(val)
    return idx


def _gather_indices(padded: np.ndarray, pattern: KernelPattern, v: int,
                    h: int, w: int) -> np.ndarray:
    """Vectorized lut_index over every pivot position."""
    idx = np.zeros((h, w), dtype=np.int64)
    for dy, dx in pattern.offsets:
        vals = padded[_PAD + dy:_PAD + dy + h, _PAD + dx:_PAD + dx + w]
        idx = idx * v + vals
    return idx


def _block_view(acc: np.ndarray) -> np.ndarray:
    """(H, W, r, r) block accumulator flattened to an (rH, rW) map."""
    h, w, r, _ = acc.shape
    return acc.transpose(0, 2, 1, 3).reshape(h * r, w * r)


def kernel_forward(plane: np.ndarray, pattern: KernelPattern, table: LutTable) -> np.ndarray:
    """Raw rotation-ensemble sum for one kernel: int32 map of shape (rH, rW).

    For each rotation j the pattern offsets are rotated j times under
    (dy, dx) -> (dx, -dy) and the looked-up r x r block is rotated j
    quarter-turns the same way before summing (no division here).  This
    pairing is what makes the ensemble commute with whole-image rotation.
    """
    plane = as_plane(plane)
    if table.n != pattern.n:
        raise ValueError(f"pattern {pattern.name} has {pattern.n} pixels, table expects {table.n}")
    if plane.max() >= table.v:
        raise ValueError(f"plane values must be < v={table.v}")
    h, w = plane.shape
    r = table.r
    padded = np.pad(plane, _PAD, mode="edge").astype(np.int64)
    blocks = table.blocks
    acc = np.zeros((h, w, r, r), dtype=np.int32)
    for j in range(pattern.rotations):
        idx = _gather_indices(padded, rotate_pattern(pattern, j), table.v, h, w)
        looked = blocks[idx].astype(np.int32)
        acc += np.rot90(looked, k=-j, axes=(2, 3))
    return _block_view(acc)


def branch_forward(plane: np.ndarray, branch: BranchSpec) -> tuple[np.ndarray, int]:
    """Sum of kernel_forward over all kernels, plus the ensemble divisor."""
    total = None
    divisor = 0
    for pattern, table in branch.kernels:
        part = kernel_forward(plane, pattern, table)
        total = part if total is None else total + part
        divisor += pattern.rotations
    return total, divisor


def div_round(s: np.ndarray, d: int) -> np.ndarray:
    """Integer division rounding half away from zero."""
    s = np.asarray(s)
    pos = (2 * s + d) // (2 * d)
    neg = -((-2 * s + d) // (2 * d))
    return np.where(s >= 0, pos, neg)


def stage_forward(img: np.ndarray, stage: StageSpec) -> np.ndarray:
    """One stage: residual upsample plus rounded MSB/LSB corrections, clamped."""
    img = as_plane(img)
    msb, lsb = split_nibbles(img)
    s_m, d_m = branch_forward(msb, stage.msb)
    s_l, d_l = branch_forward(lsb, stage.lsb)
    residual = upsample_plane(img, stage.upscale, stage.residual_mode).astype(np.int32)
    out = residual + div_round(s_m, d_m) + div_round(s_l, d_l)
    return np.clip(out, 0, 255).astype(np.uint8)


def model_forward(img: np.ndarray, model: ModelSpec) -> np.ndarray:
    """Fold stage_forward over all stages; inter-stage images are 8-bit."""
    out = as_plane(img)
    for stage in model.stages:
        out = stage_forward(out, stage)
    return out


def model_forward_tiled(img: np.ndarray, model: ModelSpec, threads: int = 1,
                        band_rows: int = 64) -> np.ndarray:
    """model_forward with per-stage row-band parallelism.

    Each band is computed with a 2-row halo (the stages' full receptive
    reach, residual modes included), so the result is bit-identical to the
    serial path for any thread count or band size.
    """
    out = as_plane(img)
    if threads <= 1:
        return model_forward(out, model)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for stage in model.stages:
            out = _stage_banded(out, stage, pool, band_rows)
    return out


def _stage_banded(img: np.ndarray, stage: StageSpec, pool, band_rows: int) -> np.ndarray:
    h = img.shape[0]
    r = stage.upscale
    starts = list(range(0, h, band_rows))
    if len(starts) == 1:
        return stage_forward(img, stage)

    def run(y0):
        y1 = min(y0 + band_rows, h)
        lo, hi = max(y0 - _PAD, 0), min(y1 + _PAD, h)
        full = stage_forward(img[lo:hi], stage)
        return full[(y0 - lo) * r:(y1 - lo) * r]

    return np.concatenate(list(pool.map(run, starts)), axis=0)
