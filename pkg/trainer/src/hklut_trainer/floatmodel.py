"""Differentiable float mirror of the integer lookup-table pipeline.

Semantics match inference: nibble planes scaled to [0, 1] by /15, per-kernel
4-way rotation ensemble averaged, branch outputs scaled by 127, per-stage
residual upsample added, clamp to [0, 255], and straight-through rounding at
the 8-bit stage boundaries so gradients flow.
"""

import math

import torch
from torch import nn
from torch.nn import functional as F

from .net import SurrogateNet
from .patterns import (ARCH_STAGES, LSB_KERNELS, MSB_KERNELS, PATTERNS,
                       ROTATIONS, rotate_offsets)

_PAD = 2  # covers the largest kernel offset


def ste_round(x):
    """Round to integers in the forward pass, identity gradient."""
    return x + (torch.round(x) - x).detach()


def split_nibbles_ste(x):
    """High/low nibble planes of an integer-valued tensor, with gradients.

    The high plane carries gradient 1/16 of the input, the low plane
    gradient 1 (the floor correction terms are detached).
    """
    m = x / 16
    msb = m + (torch.floor(m) - m).detach()
    lsb = x - (16 * torch.floor(m)).detach()
    return msb, lsb


def _keys(t, a=-0.5):
    t = abs(t)
    if t < 1:
        return (a + 2) * t ** 3 - (a + 3) * t ** 2 + 1
    if t < 2:
        return a * t ** 3 - 5 * a * t ** 2 + 8 * a * t - 4 * a
    return 0.0


def _phase_taps(mode, r):
    """Per-phase (base offset, weights) for one axis of an r-fold upsample."""
    taps = []
    for phase in range(r):
        center = (phase + 0.5) / r - 0.5
        base = math.floor(center)
        frac = center - base
        if mode == "nearest":
            taps.append((0, [1.0]))
        elif mode == "bilinear":
            taps.append((base, [1.0 - frac, frac]))
        else:
            ws = [_keys(frac - k) for k in range(-1, 3)]
            taps.append((base - 1, ws))
    return taps


def _upsample_axis(x, r, mode, dim):
    if r == 1:
        return x
    taps = _phase_taps(mode, r)
    pad = (0, 0, _PAD, _PAD) if dim == 2 else (_PAD, _PAD, 0, 0)
    padded = F.pad(x, pad, mode="replicate")
    size = x.shape[dim]
    phases = []
    for base, ws in taps:
        acc = 0.0
        for k, w in enumerate(ws):
            lo = _PAD + base + k
            sl = [slice(None)] * 4
            sl[dim] = slice(lo, lo + size)
            acc = acc + w * padded[tuple(sl)]
        phases.append(acc)
    stacked = torch.stack(phases, dim=dim + 1)  # interleave phases
    shape = list(x.shape)
    shape[dim] *= r
    if dim == 2:
        return stacked.reshape(shape[0], shape[1], shape[2], x.shape[3])
    return stacked.reshape(shape)


def upsample_float(x, r, mode):
    """r-fold upsample of (B, 1, H, W) with half-pixel centers and edge clamp.

    The result is clamped to [0, 255] like the inference engine's residual
    plane; without it, bicubic overshoot near saturation would let the float
    and integer paths diverge once corrections are added.
    """
    return torch.clamp(
        _upsample_axis(_upsample_axis(x, r, mode, 2), r, mode, 3), 0.0, 255.0)


def gather_channels(plane, offsets):
    """(B, 1, H, W) -> (B, k, H, W): channel i is the plane shifted by offset i."""
    padded = F.pad(plane, (_PAD, _PAD, _PAD, _PAD), mode="replicate")
    h, w = plane.shape[2:]
    parts = [padded[:, :, _PAD + dy:_PAD + dy + h, _PAD + dx:_PAD + dx + w]
             for dy, dx in offsets]
    return torch.cat(parts, dim=1)


def _scatter_blocks(blocks, r):
    """(B, r*r, H, W) channel c = cell (c//r, c%r)  ->  (B, 1, H*r, W*r)."""
    b, _, h, w = blocks.shape
    t = blocks.view(b, r, r, h, w).permute(0, 3, 1, 4, 2)
    return t.reshape(b, 1, h * r, w * r)


def branch_correction(plane, nets, kernel_names, r):
    """Averaged rotation-ensemble correction of one branch, scaled by 127.

    ``plane`` holds nibble values in [0, 15]; nets see them divided by 15.
    For each rotation j the pattern offsets rotate one way and the produced
    block rotates back the same array direction, mirroring inference.
    """
    scaled = plane / 15.0
    acc = 0.0
    for net, name in zip(nets, kernel_names):
        offsets = PATTERNS[name]
        for j in range(ROTATIONS):
            gathered = gather_channels(scaled, rotate_offsets(offsets, j))
            blocks = net(gathered).view(-1, r, r, *gathered.shape[2:])
            blocks = torch.rot90(blocks, k=-j, dims=(1, 2))
            acc = acc + _scatter_blocks(blocks.flatten(1, 2), r)
    return 127.0 * acc / (ROTATIONS * len(nets))


class FloatStage(nn.Module):
    def __init__(self, r, residual_mode="nearest"):
        super().__init__()
        self.r = r
        self.residual_mode = residual_mode
        self.msb_names = MSB_KERNELS
        self.lsb_names = LSB_KERNELS
        self.msb_nets = nn.ModuleList(
            SurrogateNet(len(PATTERNS[n]), r) for n in self.msb_names)
        self.lsb_nets = nn.ModuleList(
            SurrogateNet(len(PATTERNS[n]), r) for n in self.lsb_names)

    def forward(self, x):
        """(B, 1, H, W) integer-valued in [0, 255] -> same, scaled by r."""
        msb, lsb = split_nibbles_ste(x)
        corr = (branch_correction(msb, self.msb_nets, self.msb_names, self.r)
                + branch_correction(lsb, self.lsb_nets, self.lsb_names, self.r))
        residual = upsample_float(x, self.r, self.residual_mode)
        return ste_round(torch.clamp(residual + corr, 0.0, 255.0))


class FloatModel(nn.Module):
    """Stage cascade mirroring a multistage lookup-table model."""

    def __init__(self, arch="hklut-s", residual_mode="nearest"):
        super().__init__()
        self.arch = arch
        self.stages = nn.ModuleList(
            FloatStage(r, residual_mode) for r in ARCH_STAGES[arch])

    @property
    def scale(self):
        out = 1
        for stage in self.stages:
            out *= stage.r
        return out

    def forward(self, x):
        for stage in self.stages:
            x = stage(x)
        return x

    def zero_output(self):
        for stage in self.stages:
            for net in [*stage.msb_nets, *stage.lsb_nets]:
                net.zero_output()
        return self
