"""Op counting, energy estimation, runtime benchmarking and evaluation reports.

The op accounting is a documented model, per output image:

  lookups     sum over stages of H_s * W_s * sum over branches of N * 4
              (H_s, W_s are the stage's *input* dims)
  int8 adds   index formation: (n - 1) adds per lookup
  int32 adds  accumulation (one add per looked-up block cell), the
              rounding bias add per branch output cell, and the final
              residual + two corrections (2 adds per output cell);
              non-nearest residual modes add their tap accumulations
  float ops   always zero for the integer LUT pipeline

Energy multiplies each count by a per-op cost (pJ).  Defaults follow the
common 45 nm accounting; a table lookup is costed as one 8-bit add.  The
cost table is configuration and can be overridden from a TOML file.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field, replace

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from .engine import model_forward
from .model import ModelSpec, lut_size_bytes


@dataclass(frozen=True)
class EnergyCosts:
    """Per-operation energy in picojoules."""

    int8_add: float = 0.03
    int32_add: float = 0.1
    float32_add: float = 0.9
    float32_mult: float = 3.7
    lookup: float = 0.03  # costed as one 8-bit add

    @classmethod
    def from_toml(cls, path) -> "EnergyCosts":
        with open(path, "rb") as f:
            data = tomllib.load(f)
        table = data.get("energy", data)
        known = {k: float(v) for k, v in table.items() if k in cls.__dataclass_fields__}
        unknown = set(table) - set(known)
        if unknown:
            raise ValueError(f"unknown energy cost keys: {sorted(unknown)}")
        return replace(cls(), **known)


@dataclass
class OpCounts:
    lookups: int = 0
    int8_adds: int = 0
    int32_adds: int = 0
    float_adds: int = 0
    float_mults: int = 0

    def __add__(self, other: "OpCounts") -> "OpCounts":
        return OpCounts(*(a + b for a, b in zip(self._tuple(), other._tuple())))

    def _tuple(self):
        return (self.lookups, self.int8_adds, self.int32_adds,
                self.float_adds, self.float_mults)

    @property
    def float_ops(self) -> int:
        return self.float_adds + self.float_mults

    def energy_pj(self, costs: EnergyCosts = EnergyCosts()) -> float:
        return (self.lookups * costs.lookup
                + self.int8_adds * costs.int8_add
                + self.int32_adds * costs.int32_add
                + self.float_adds * costs.float32_add
                + self.float_mults * costs.float32_mult)


_RESIDUAL_TAPS = {"nearest": 0, "bilinear": 4, "bicubic": 16}


def estimate_ops(model: ModelSpec, out_height: int, out_width: int) -> OpCounts:
    """Theoretical op counts for one forward pass at the given output size."""
    scale = model.total_upscale
    if out_height % scale or out_width % scale:
        raise ValueError(f"output {out_height}x{out_width} is not a multiple "
                         f"of the total upscale {scale}")
    h, w = out_height // scale, out_width // scale
    total = OpCounts()
    for stage in model.stages:
        pixels = h * w
        r2 = stage.upscale ** 2
        counts = OpCounts()
        for branch in (stage.msb, stage.lsb):
            lookups = sum(pixels * p.rotations for p, _ in branch.kernels)
            counts.lookups += lookups
            counts.int8_adds += sum(pixels * p.rotations * (p.n - 1)
                                    for p, _ in branch.kernels)
            counts.int32_adds += lookups * r2       # block accumulation
            counts.int32_adds += pixels * r2        # rounding bias add
        counts.int32_adds += pixels * r2 * 2        # residual + two corrections
        counts.int32_adds += pixels * r2 * _RESIDUAL_TAPS[stage.residual_mode]
        total = total + counts
        h, w = h * stage.upscale, w * stage.upscale
    return total


def estimate_ops_interp_reference(out_height: int, out_width: int, r: int = 4,
                                  n: int = 4, rotations: int = 4) -> OpCounts:
    """Op counts for a single-stage 4-pixel LUT with simplex interpolation.

    Models the classic interpolated-LUT pipeline (17-level quantization):
    per pixel and rotation, n vertex lookups of the n-simplex plus a
    float weighted blend of the vertex blocks.
    """
    if out_height % r or out_width % r:
        raise ValueError(f"output {out_height}x{out_width} not a multiple of r={r}")
    pixels = (out_height // r) * (out_width // r)
    r2 = r * r
    counts = OpCounts()
    counts.lookups = pixels * rotations * n
    counts.int8_adds = pixels * rotations * (n - 1)          # index formation
    counts.float_mults = pixels * rotations * r2 * n         # weight * vertex
    counts.float_adds = pixels * rotations * r2 * (n - 1)    # blend sum
    counts.float_adds += pixels * r2 * (rotations - 1)       # ensemble average
    counts.int32_adds = pixels * r2 * 2                      # residual + clamp path
    return counts


def bench_runtime(model: ModelSpec, height: int, width: int, repeats: int = 10,
                  seed: int = 0) -> tuple[float, float, list[float]]:
    """Mean/stddev wall-clock milliseconds of model_forward, warm-up discarded."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    rng = np.random.default_rng(seed)
    img = rng.integers(0, 256, size=(height, width), dtype=np.uint8)
    model_forward(img, model)  # warm-up
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        model_forward(img, model)
        samples.append((time.perf_counter() - t0) * 1e3)
    mean = statistics.fmean(samples)
    std = statistics.stdev(samples) if repeats > 1 else 0.0
    return mean, std, samples


@dataclass
class EvalReport:
    """Per-image and aggregate fidelity plus cost summary for one run."""

    dataset: str
    method: str
    scale: int
    per_image: list[tuple[str, float, float]] = field(default_factory=list)  # name, psnr, ssim
    model_size_bytes: int = 0
    ops: OpCounts | None = None
    energy_pj: float | None = None
    lr_source: str = "official"

    @property
    def mean_psnr(self) -> float:
        return statistics.fmean(p for _, p, _ in self.per_image)

    @property
    def mean_ssim(self) -> float:
        return statistics.fmean(s for _, _, s in self.per_image)

    def lines(self) -> list[str]:
        out = [f"dataset {self.dataset}  method {self.method}  x{self.scale}  "
               f"lr={self.lr_source}"]
        for name, p, s in self.per_image:
            out.append(f"  {name}: PSNR {p:.2f} dB  SSIM {s:.4f}")
        out.append(f"mean: PSNR {self.mean_psnr:.2f} dB  SSIM {self.mean_ssim:.4f}")
        if self.model_size_bytes:
            out.append(f"model size: {self.model_size_bytes} B")
        if self.ops is not None:
            out.append(f"ops: lookups={self.ops.lookups} int8={self.ops.int8_adds} "
                       f"int32={self.ops.int32_adds} float={self.ops.float_ops}")
        if self.energy_pj is not None:
            out.append(f"energy: {self.energy_pj:.1f} pJ")
        return out

    def kv_lines(self) -> list[str]:
        """Machine-readable `dataset image metric value` lines."""
        out = []
        for name, p, s in self.per_image:
            out.append(f"{self.dataset} {name} psnr {p:.6f}")
            out.append(f"{self.dataset} {name} ssim {s:.6f}")
        out.append(f"{self.dataset} mean psnr {self.mean_psnr:.6f}")
        out.append(f"{self.dataset} mean ssim {self.mean_ssim:.6f}")
        if self.model_size_bytes:
            out.append(f"{self.dataset} model size_bytes {self.model_size_bytes}")
        if self.ops is not None:
            out.append(f"{self.dataset} model float_ops {self.ops.float_ops}")
        return out


def attach_cost_summary(report: EvalReport, model: ModelSpec,
                        out_height: int, out_width: int,
                        costs: EnergyCosts = EnergyCosts()) -> EvalReport:
    report.model_size_bytes = lut_size_bytes(model)
    report.ops = estimate_ops(model, out_height, out_width)
    report.energy_pj = report.ops.energy_pj(costs)
    return report
