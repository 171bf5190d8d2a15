"""Data model for kernel patterns, LUTs, branches, stages and whole models.

All types are frozen after construction and safe to share across workers.
Storage accounting is exact (1 entry = 1 byte, 1 KB = 1024 B).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Canonical kernel patterns, pivot first.  The two-pixel pair {H, D} tiles
# the 3x3 window under the 4-rotation ensemble; the three-pixel triple
# {HDB_A, HDB_B, HDB_C} tiles the 5x5 window; L tiles 3x3 on its own.
BUILTIN_PATTERNS = {
    "S": ((0, 0), (0, 1), (1, 0), (1, 1)),
    "H": ((0, 0), (0, 1)),
    "D": ((0, 0), (1, 1)),
    "L": ((0, 0), (0, 1), (1, 1)),
    "HDB_A": ((0, 0), (0, 1), (0, 2)),
    "HDB_B": ((0, 0), (1, 1), (2, 2)),
    "HDB_C": ((0, 0), (1, 2), (2, 1)),
}

ENTRY_MIN = -127
ENTRY_MAX = 127

RESIDUAL_MODES = ("nearest", "bilinear", "bicubic")


class ModelError(ValueError):
    """Invalid model structure or parameters."""


@dataclass(frozen=True)
class KernelPattern:
    """Ordered set of pixel offsets (pivot first) indexing one LUT."""

    name: str
    offsets: tuple[tuple[int, int], ...]
    rotations: int = 4

    def __post_init__(self):
        if not self.offsets or self.offsets[0] != (0, 0):
            raise ModelError(f"pattern {self.name}: first offset must be the (0,0) pivot")
        if len(set(self.offsets)) != len(self.offsets):
            raise ModelError(f"pattern {self.name}: duplicate offsets")
        if not 1 <= len(self.offsets) <= 4:
            raise ModelError(f"pattern {self.name}: need 1..4 offsets, got {len(self.offsets)}")
        if any(max(abs(dy), abs(dx)) > 2 for dy, dx in self.offsets):
            raise ModelError(f"pattern {self.name}: offsets must stay within a 5x5 window")
        if self.rotations not in (1, 2, 4):
            raise ModelError(f"pattern {self.name}: rotations must be 1, 2 or 4")

    @property
    def n(self) -> int:
        return len(self.offsets)


def builtin_pattern(name: str) -> KernelPattern:
    """Return a canonical pattern by name (S, H, D, L, HDB_A, HDB_B, HDB_C)."""
    try:
        offsets = BUILTIN_PATTERNS[name]
    except KeyError:
        raise ModelError(f"unknown builtin pattern {name!r}, "
                         f"choose from {sorted(BUILTIN_PATTERNS)}") from None
    return KernelPattern(name=name, offsets=offsets, rotations=4)


def rotate_offset(dy: int, dx: int, j: int) -> tuple[int, int]:
    """Apply the 90-degree clockwise map (dy, dx) -> (dx, -dy) j times."""
    for _ in range(j % 4):
        dy, dx = dx, -dy
    return dy, dx


def rotate_pattern(pattern: KernelPattern, j: int) -> KernelPattern:
    """Rotate every offset of a pattern j quarter-turns clockwise."""
    if not 0 <= j < 4:
        raise ModelError(f"rotation index must be in [0, 4), got {j}")
    if j == 0:
        return pattern
    offsets = tuple(rotate_offset(dy, dx, j) for dy, dx in pattern.offsets)
    return KernelPattern(name=pattern.name, offsets=offsets, rotations=pattern.rotations)


@dataclass(frozen=True)
class LutTable:
    """Cached mapping of v^n input tuples to r x r signed residual blocks.

    ``entries`` is flat, entry-major then row-major within each r x r block.
    """

    v: int
    n: int
    r: int
    entries: np.ndarray  # int8, shape (v**n * r*r,)

    def __post_init__(self):
        if self.v < 2:
            raise ModelError(f"need at least 2 quantization levels, got {self.v}")
        if not 1 <= self.n <= 4:
            raise ModelError(f"input pixel count must be 1..4, got {self.n}")
        if self.r < 1:
            raise ModelError(f"upscale factor must be >= 1, got {self.r}")
        entries = np.asarray(self.entries, dtype=np.int8)
        expected = self.v ** self.n * self.r * self.r
        if entries.ndim != 1 or entries.size != expected:
            raise ModelError(f"table needs {expected} entries "
                             f"(v={self.v}, n={self.n}, r={self.r}), got {entries.size}")
        bad = np.flatnonzero((entries < ENTRY_MIN) | (entries > ENTRY_MAX))
        if bad.size:
            raise ModelError(f"entry {bad[0]} = {entries[bad[0]]} outside "
                             f"[{ENTRY_MIN}, {ENTRY_MAX}]")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def blocks(self) -> np.ndarray:
        """Entries viewed as (v^n, r, r)."""
        return self.entries.reshape(self.v ** self.n, self.r, self.r)

    def size_bytes(self) -> int:
        return self.entries.size


def zero_table(v: int, n: int, r: int) -> LutTable:
    return LutTable(v=v, n=n, r=r, entries=np.zeros(v ** n * r * r, dtype=np.int8))


def constant_table(v: int, n: int, r: int, value: int) -> LutTable:
    if not ENTRY_MIN <= value <= ENTRY_MAX:
        raise ModelError(f"constant {value} outside [{ENTRY_MIN}, {ENTRY_MAX}]")
    return LutTable(v=v, n=n, r=r, entries=np.full(v ** n * r * r, value, dtype=np.int8))


@dataclass(frozen=True)
class BranchSpec:
    """One nibble branch: N (pattern, table) pairs sharing r and v."""

    kernels: tuple[tuple[KernelPattern, LutTable], ...]

    def __post_init__(self):
        if not self.kernels:
            raise ModelError("a branch needs at least one kernel")
        kernels = tuple(self.kernels)
        r0, v0 = kernels[0][1].r, kernels[0][1].v
        for pattern, table in kernels:
            if table.n != pattern.n:
                raise ModelError(f"kernel {pattern.name}: pattern has {pattern.n} pixels "
                                 f"but table expects {table.n}")
            if table.r != r0 or table.v != v0:
                raise ModelError("all tables in a branch must share the same r and v")
        object.__setattr__(self, "kernels", kernels)

    @property
    def r(self) -> int:
        return self.kernels[0][1].r

    @property
    def v(self) -> int:
        return self.kernels[0][1].v

    @property
    def n_kernels(self) -> int:
        return len(self.kernels)


@dataclass(frozen=True)
class StageSpec:
    """One stage: MSB and LSB branches plus the per-stage residual upsampler."""

    msb: BranchSpec
    lsb: BranchSpec
    residual_mode: str = "nearest"

    def __post_init__(self):
        if self.msb.r != self.lsb.r:
            raise ModelError(f"branch upscales differ: msb r={self.msb.r}, lsb r={self.lsb.r}")
        if self.residual_mode not in RESIDUAL_MODES:
            raise ModelError(f"residual_mode must be one of {RESIDUAL_MODES}, "
                             f"got {self.residual_mode!r}")

    @property
    def upscale(self) -> int:
        return self.msb.r


@dataclass(frozen=True)
class ModelSpec:
    """Ordered stages plus free-form metadata."""

    stages: tuple[StageSpec, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))

    @property
    def total_upscale(self) -> int:
        scale = 1
        for stage in self.stages:
            scale *= stage.upscale
        return scale

    def tables(self):
        """All tables in file order (stage, then MSB before LSB, then kernel)."""
        for stage in self.stages:
            for branch in (stage.msb, stage.lsb):
                for _, table in branch.kernels:
                    yield table


def lut_size_bytes(obj) -> int:
    """Exact entry storage in bytes: v^n * r^2 per table, summed over a model."""
    if isinstance(obj, LutTable):
        return obj.size_bytes()
    if isinstance(obj, ModelSpec):
        return sum(t.size_bytes() for t in obj.tables())
    raise TypeError(f"expected LutTable or ModelSpec, got {type(obj).__name__}")


def format_size(num_bytes: int) -> str:
    """Human-readable size with 1 KB = 1024 B (e.g. '100.0 KB', '1.27 MB')."""
    if num_bytes < 1024:
        return f"{num_bytes} B"
    value, unit = num_bytes / 1024, "KB"
    if value >= 1024:
        value, unit = value / 1024, "MB"
    text = f"{value:.2f}"
    if text.endswith("0"):
        text = text[:-1]
    return f"{text} {unit}"


# Branch shape helpers ------------------------------------------------------

MSB_KERNELS = ("HDB_A", "HDB_B", "HDB_C")  # 3-pixel triple, 5x5 coverage
LSB_KERNELS = ("H", "D")                   # 2-pixel pair, 3x3 coverage


def _branch(kernel_names, v, r, table_fn) -> BranchSpec:
    kernels = []
    for name in kernel_names:
        pattern = builtin_pattern(name)
        kernels.append((pattern, table_fn(v, pattern.n, r)))
    return BranchSpec(kernels=tuple(kernels))


def make_stage(r: int, v: int = 16, residual_mode: str = "nearest",
               table_fn=zero_table, msb_kernels=MSB_KERNELS,
               lsb_kernels=LSB_KERNELS) -> StageSpec:
    """Asymmetric stage: 3-pixel MSB triple, 2-pixel LSB pair by default."""
    return StageSpec(msb=_branch(msb_kernels, v, r, table_fn),
                     lsb=_branch(lsb_kernels, v, r, table_fn),
                     residual_mode=residual_mode)


PRESET_STAGE_UPSCALES = {
    "hklut-s": (2, 2),
    "hklut-l": (2, 1, 2),
}


def preset_model(name: str, table_fn=zero_table, residual_mode: str = "nearest") -> ModelSpec:
    """Standard model shapes: 'hklut-s' (2x2 stages) and 'hklut-l' (2x1x2)."""
    try:
        upscales = PRESET_STAGE_UPSCALES[name]
    except KeyError:
        raise ModelError(f"unknown preset {name!r}, "
                         f"choose from {sorted(PRESET_STAGE_UPSCALES)}") from None
    stages = tuple(make_stage(r, residual_mode=residual_mode, table_fn=table_fn)
                   for r in upscales)
    return ModelSpec(stages=stages, metadata={"name": name})
