"""Self-checks: engine vs naive reference, rotation equivariance, zero-LUT
neutrality, plus random model/image generators shared with the test suite."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import model_forward
from .model import (BUILTIN_PATTERNS, BranchSpec, LutTable, ModelSpec, StageSpec,
                    builtin_pattern, preset_model, zero_table)
from .reference import reference_forward
from .resample import upsample_plane


def random_table(rng: np.random.Generator, v: int, n: int, r: int) -> LutTable:
    entries = rng.integers(-127, 128, size=v ** n * r * r, dtype=np.int64)
    return LutTable(v=v, n=n, r=r, entries=entries.astype(np.int8))


def random_branch(rng: np.random.Generator, v: int, r: int) -> BranchSpec:
    names = list(BUILTIN_PATTERNS)
    picks = rng.choice(len(names), size=rng.integers(1, 4), replace=False)
    kernels = []
    for i in picks:
        pattern = builtin_pattern(names[i])
        kernels.append((pattern, random_table(rng, v, pattern.n, r)))
    return BranchSpec(kernels=tuple(kernels))


def random_model(rng: np.random.Generator, max_stages: int = 3, v: int = 16) -> ModelSpec:
    stages = []
    for _ in range(rng.integers(1, max_stages + 1)):
        r = int(rng.choice([1, 2, 2]))
        mode = ["nearest", "bilinear", "bicubic"][rng.integers(0, 3)]
        stages.append(StageSpec(msb=random_branch(rng, v, r),
                                lsb=random_branch(rng, v, r),
                                residual_mode=mode))
    return ModelSpec(stages=tuple(stages))


def random_image(rng: np.random.Generator, max_side: int = 24) -> np.ndarray:
    h = int(rng.integers(1, max_side + 1))
    w = int(rng.integers(1, max_side + 1))
    return rng.integers(0, 256, size=(h, w), dtype=np.uint8)


@dataclass
class Failure:
    check: str
    detail: str

    def __str__(self) -> str:
        return f"{self.check}: {self.detail}"


def _mismatch_detail(got: np.ndarray, want: np.ndarray) -> str:
    if got.shape != want.shape:
        return f"shape {got.shape} != {want.shape}"
    ys, xs = np.nonzero(got.astype(np.int32) - want.astype(np.int32))
    y, x = int(ys[0]), int(xs[0])
    return f"first mismatch at ({y}, {x}): {got[y, x]} != {want[y, x]}"


def check_oracle_equivalence(model: ModelSpec, img: np.ndarray) -> Failure | None:
    got = model_forward(img, model)
    want = reference_forward(img, model)
    if not np.array_equal(got, want):
        return Failure("oracle-equivalence",
                       f"{img.shape} image: {_mismatch_detail(got, want)}")
    return None


def check_rotation_equivariance(model: ModelSpec, img: np.ndarray) -> Failure | None:
    for k in range(1, 4):
        got = model_forward(np.rot90(img, k).copy(), model)
        want = np.rot90(model_forward(img, model), k)
        if not np.array_equal(got, want):
            return Failure("rotation-equivariance",
                           f"{img.shape} image, k={k}: {_mismatch_detail(got, want)}")
    return None


def check_zero_neutrality(img: np.ndarray, preset: str = "hklut-s") -> Failure | None:
    model = preset_model(preset, table_fn=zero_table)
    got = model_forward(img, model)
    want = img
    for stage in model.stages:
        want = upsample_plane(want, stage.upscale, "nearest")
    if not np.array_equal(got, want):
        return Failure("zero-lut-neutrality",
                       f"{img.shape} image: {_mismatch_detail(got, want)}")
    return None


def run_verification(model: ModelSpec | None = None, random_n: int = 10,
                     seed: int = 0, max_side: int = 16) -> list[Failure]:
    """Run all suites; returns the (hopefully empty) list of failures."""
    rng = np.random.default_rng(seed)
    failures = []
    cases = []
    if model is not None:
        cases = [(model, random_image(rng, max_side)) for _ in range(max(random_n, 1))]
    else:
        cases = [(random_model(rng), random_image(rng, max_side))
                 for _ in range(random_n)]
    for m, img in cases:
        for check in (check_oracle_equivalence, check_rotation_equivariance):
            failure = check(m, img)
            if failure:
                failures.append(failure)
    for _ in range(max(random_n // 2, 1)):
        failure = check_zero_neutrality(random_image(rng, max_side))
        if failure:
            failures.append(failure)
    return failures
