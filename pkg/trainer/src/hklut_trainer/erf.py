"""Effective-receptive-field maps of the branch surrogate nets."""

import numpy as np
import torch

from .floatmodel import branch_correction
from .patterns import PATTERNS, ROTATIONS, rotate_offsets


def compute_erf(nets, kernel_names, plane, region, r):
    """Normalized |gradient| of a branch's output over a region w.r.t. its input.

    ``plane`` is a nibble plane (values 0..15); ``region`` is (y, x, size) in
    output coordinates.  The summed branch correction over the region is
    differentiated w.r.t. the input plane; the absolute gradient is
    normalized by its maximum (zero map stays zero).
    """
    x = torch.tensor(np.asarray(plane, dtype=np.float32))[None, None]
    x.requires_grad_(True)
    out = branch_correction(x, nets, kernel_names, r)
    y0, x0, size = region
    out[0, 0, y0:y0 + size, x0:x0 + size].sum().backward()
    grad = x.grad[0, 0].abs().numpy()
    peak = grad.max()
    return grad / peak if peak > 0 else grad


def support_bound(kernel_names, shape, region, r):
    """Boolean mask of input pixels reachable from the output region."""
    y0, x0, size = region
    mask = np.zeros(shape, dtype=bool)
    offsets = {off for name in kernel_names for j in range(ROTATIONS)
               for off in rotate_offsets(PATTERNS[name], j)}
    for oy in range(y0, y0 + size):
        for ox in range(x0, x0 + size):
            iy, ix = oy // r, ox // r
            for dy, dx in offsets:
                yy = min(max(iy + dy, 0), shape[0] - 1)
                xx = min(max(ix + dx, 0), shape[1] - 1)
                mask[yy, xx] = True
    return mask


def effective_radius(erf_map):
    """Second-moment radius of a normalized gradient map about its centroid."""
    total = erf_map.sum()
    if total == 0:
        return 0.0
    ys, xs = np.indices(erf_map.shape)
    cy = (ys * erf_map).sum() / total
    cx = (xs * erf_map).sum() / total
    sq = ((ys - cy) ** 2 + (xs - cx) ** 2) * erf_map
    return float(np.sqrt(sq.sum() / total))
