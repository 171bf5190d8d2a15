"""Bit-exact `.hklut` model file format.

Layout (all counts single-byte, entry blocks raw, no padding):

    magic "HKLT" | version u8 (=1) | n_stages u8
    per stage:  r u8 | residual_mode u8 (0 nearest, 1 bilinear, 2 bicubic)
                two branches, MSB first:
                    n_kernels u8
                    per kernel: n u8 | v u8 | n x (dy i8, dx i8) | v^n * r^2 i8 entries

Declared lengths must exactly exhaust the file; trailing bytes are an error.
"""

from __future__ import annotations

import io

import numpy as np

from .model import (BranchSpec, KernelPattern, LutTable, ModelError, ModelSpec,
                    StageSpec, format_size, lut_size_bytes)

MAGIC = b"HKLT"
VERSION = 1

_MODE_TO_CODE = {"nearest": 0, "bilinear": 1, "bicubic": 2}
_CODE_TO_MODE = {c: m for m, c in _MODE_TO_CODE.items()}


class FormatError(ValueError):
    """Malformed `.hklut` stream."""


class MagicError(FormatError):
    """Stream does not start with the HKLT magic."""


class VersionError(FormatError):
    """Unsupported format version."""


class TruncationError(FormatError):
    """Stream ended before the declared content."""


def save_model(model: ModelSpec, sink) -> int:
    """Write a model to a binary stream; returns the byte count."""
    out = io.BytesIO()
    out.write(MAGIC)
    out.write(bytes([VERSION, _checked_u8(len(model.stages), "stage count")]))
    for stage in model.stages:
        out.write(bytes([_checked_u8(stage.upscale, "stage upscale"),
                         _MODE_TO_CODE[stage.residual_mode]]))
        for branch in (stage.msb, stage.lsb):
            out.write(bytes([_checked_u8(branch.n_kernels, "kernel count")]))
            for pattern, table in branch.kernels:
                out.write(bytes([table.n, _checked_u8(table.v, "quantization levels")]))
                for dy, dx in pattern.offsets:
                    out.write(np.array([dy, dx], dtype=np.int8).tobytes())
                out.write(table.entries.tobytes())
    data = out.getvalue()
    sink.write(data)
    return len(data)


def save_model_file(model: ModelSpec, path) -> int:
    with open(path, "wb") as f:
        return save_model(model, f)


def load_model(source) -> ModelSpec:
    """Read a model back; inverse of save_model, validating all invariants."""
    magic = source.read(4)
    if len(magic) < 4:
        raise TruncationError("stream shorter than the 4-byte magic")
    if magic != MAGIC:
        raise MagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
    version = _read_u8(source, "version")
    if version != VERSION:
        raise VersionError(f"unsupported version {version}, expected {VERSION}")
    n_stages = _read_u8(source, "stage count")
    stages = []
    for _ in range(n_stages):
        r = _read_u8(source, "stage upscale")
        mode_code = _read_u8(source, "residual mode")
        if mode_code not in _CODE_TO_MODE:
            raise FormatError(f"unknown residual mode code {mode_code}")
        branches = []
        for _ in range(2):
            n_kernels = _read_u8(source, "kernel count")
            kernels = []
            for _ in range(n_kernels):
                n = _read_u8(source, "pixel count")
                v = _read_u8(source, "quantization levels")
                raw = _read_exact(source, 2 * n, "kernel offsets")
                offs = np.frombuffer(raw, dtype=np.int8).reshape(n, 2)
                pattern = KernelPattern(name=f"k{len(kernels)}",
                                        offsets=tuple((int(dy), int(dx)) for dy, dx in offs))
                size = v ** n * r * r
                entries = np.frombuffer(_read_exact(source, size, "table entries"),
                                        dtype=np.int8)
                kernels.append((pattern, LutTable(v=v, n=n, r=r, entries=entries)))
            branches.append(BranchSpec(kernels=tuple(kernels)))
        stages.append(StageSpec(msb=branches[0], lsb=branches[1],
                                residual_mode=_CODE_TO_MODE[mode_code]))
    trailing = source.read(1)
    if trailing:
        raise FormatError("trailing bytes after the declared content")
    return ModelSpec(stages=tuple(stages))


def load_model_file(path) -> ModelSpec:
    with open(path, "rb") as f:
        return load_model(f)


def inspect(model: ModelSpec) -> str:
    """Human-readable summary; the total matches lut_size_bytes exactly."""
    lines = [f"stages: {len(model.stages)}  total upscale: x{model.total_upscale}"]
    total = 0
    for si, stage in enumerate(model.stages):
        lines.append(f"stage {si}: r={stage.upscale} residual={stage.residual_mode}")
        for label, branch in (("msb", stage.msb), ("lsb", stage.lsb)):
            for pattern, table in branch.kernels:
                size = lut_size_bytes(table)
                total += size
                lines.append(f"  {label} {pattern.name:>6}  v={table.v} n={table.n} "
                             f"r={table.r}  {format_size(size)}")
    lines.append(f"total {format_size(total)}")
    assert total == lut_size_bytes(model)
    return "\n".join(lines)


def _checked_u8(value: int, what: str) -> int:
    if not 0 <= value <= 255:
        raise ModelError(f"{what} {value} does not fit in one byte")
    return value


def _read_u8(source, what: str) -> int:
    return _read_exact(source, 1, what)[0]


def _read_exact(source, count: int, what: str) -> bytes:
    data = source.read(count)
    if len(data) != count:
        raise TruncationError(f"truncated stream while reading {what} "
                              f"({len(data)}/{count} bytes)")
    return data
