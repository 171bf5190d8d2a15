"""Naive reference implementations used to cross-check the engine.

Everything here is written as plain nested loops over Python ints,
directly off the definitions, and shares no code with the optimized
engine.  Clarity over speed, on purpose.
"""

from __future__ import annotations

import itertools

import numpy as np

from .model import LutTable, ModelSpec


def _clamp(val, lo, hi):
    return lo if val < lo else hi if val > hi else val


def _rot_offset_cw(dy, dx):
    return dx, -dy


def _round_div(s, d):
    # round half away from zero
    if s >= 0:
        return (2 * s + d) // (2 * d)
    return -((-2 * s + d) // (2 * d))


def _rot_block(block):
    """One quarter-turn of an r x r list-of-lists, matching the offset map
    (dy, dx) -> (dx, -dy): cell (by, bx) moves to (bx, r-1-by)."""
    r = len(block)
    return [[block[r - 1 - i][j] for i in range(r)] for j in range(r)]


def _residual_reference(img, r, mode):
    from .resample import upsample_plane  # residual definition is shared contract
    return upsample_plane(np.array(img, dtype=np.uint8), r, mode).tolist()


def reference_forward(img, model: ModelSpec) -> np.ndarray:
    """Unoptimized forward pass, same contract as engine.model_forward."""
    plane = np.asarray(img, dtype=np.uint8).tolist()
    for stage in model.stages:
        plane = _reference_stage(plane, stage)
    return np.array(plane, dtype=np.uint8)


def _reference_stage(plane, stage):
    h, w = len(plane), len(plane[0])
    r = stage.upscale
    msb = [[p >> 4 for p in row] for row in plane]
    lsb = [[p & 15 for p in row] for row in plane]
    out = _residual_reference(plane, r, stage.residual_mode)
    corrections = [_reference_branch(msb, stage.msb, h, w, r),
                   _reference_branch(lsb, stage.lsb, h, w, r)]
    for y in range(h * r):
        for x in range(w * r):
            val = out[y][x] + corrections[0][y][x] + corrections[1][y][x]
            out[y][x] = _clamp(val, 0, 255)
    return out


def _reference_branch(plane, branch, h, w, r):
    total = [[0] * (w * r) for _ in range(h * r)]
    divisor = 0
    for pattern, table in branch.kernels:
        divisor += pattern.rotations
        for y in range(h):
            for x in range(w):
                block = [[0] * r for _ in range(r)]
                for j in range(pattern.rotations):
                    offsets = list(pattern.offsets)
                    for _ in range(j):
                        offsets = [_rot_offset_cw(dy, dx) for dy, dx in offsets]
                    idx = 0
                    for dy, dx in offsets:
                        py = _clamp(y + dy, 0, h - 1)
                        px = _clamp(x + dx, 0, w - 1)
                        idx = idx * table.v + plane[py][px]
                    looked = [[int(table.entries[idx * r * r + by * r + bx])
                               for bx in range(r)] for by in range(r)]
                    for _ in range(j):
                        looked = _rot_block(looked)
                    for by in range(r):
                        for bx in range(r):
                            block[by][bx] += looked[by][bx]
                for by in range(r):
                    for bx in range(r):
                        total[y * r + by][x * r + bx] += block[by][bx]
    return [[_round_div(s, divisor) for s in row] for row in total]


def build_lut_from_function(f, v: int, n: int, r: int) -> LutTable:
    """Exhaustively cache f over all v^n input tuples, in index order.

    f maps an n-tuple of ints in [0, v) to an r x r block of ints in
    [-127, 127] (a scalar is broadcast for r == 1 blocks given as int).
    """
    entries = np.empty(v ** n * r * r, dtype=np.int64)
    pos = 0
    for values in itertools.product(range(v), repeat=n):
        block = np.asarray(f(values), dtype=np.int64).reshape(r, r)
        if block.min() < -127 or block.max() > 127:
            raise ValueError(f"f{values} produced entries outside [-127, 127]")
        entries[pos:pos + r * r] = block.reshape(-1)
        pos += r * r
    return LutTable(v=v, n=n, r=r, entries=entries.astype(np.int8))


def lookup(table: LutTable, values) -> np.ndarray:
    """The r x r block cached for one input tuple (for exhaustive checks)."""
    idx = 0
    for val in values:
        idx = idx * table.v + int(val)
    r = table.r
    return np.array(table.entries[idx * r * r:(idx + 1) * r * r]).reshape(r, r)
