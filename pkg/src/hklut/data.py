"""PNG I/O, dataset discovery and LR fixture generation.

Dataset layout: ``<root>/<name>/HR/*.png`` paired with
``<root>/<name>/LR_bicubic/X{scale}/*.png``.  LR files may carry an
``x{scale}`` stem suffix (the conventional benchmark naming).

Evaluation should use official pre-generated LR files when present;
``make_lr`` is a fallback whose output is NOT guaranteed identical to the
official degradations, and reports flag it as such.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .resample import downscale_antialiased

DATASET_ENV = "HKLUT_DATASETS"


class DatasetError(ValueError):
    """Missing or malformed dataset layout."""


def read_png(path) -> np.ndarray:
    """Decode a PNG to uint8: HxWx3 RGB, or HxW for grayscale sources.

    16-bit sources keep only the high byte; alpha is dropped.
    """
    with Image.open(path) as im:
        im.load()
        if im.mode in ("I", "I;16", "I;16B"):
            arr = np.asarray(im, dtype=np.uint32)
            return (arr >> 8).astype(np.uint8) if arr.max() > 255 else arr.astype(np.uint8)
        if im.mode == "L":
            return np.asarray(im, dtype=np.uint8)
        if im.mode == "P":
            im = im.convert("RGB")
        arr = np.asarray(im.convert("RGBA") if "A" in im.mode else im.convert("RGB"))
    return np.ascontiguousarray(arr[..., :3])


def write_png(image, path) -> None:
    """Lossless 8-bit PNG encode; inverse of read_png on 8-bit content."""
    arr = np.asarray(image, dtype=np.uint8)
    if arr.ndim == 2:
        im = Image.fromarray(arr, mode="L")
    elif arr.ndim == 3 and arr.shape[2] == 3:
        im = Image.fromarray(arr, mode="RGB")
    else:
        raise ValueError(f"cannot encode image of shape {arr.shape}")
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    im.save(path, format="PNG")


@dataclass(frozen=True)
class DatasetIndex:
    name: str
    scale: int
    records: tuple[tuple[Path, Path], ...]  # (HR path, LR path)

    def __len__(self) -> int:
        return len(self.records)


def default_dataset_root() -> Path | None:
    root = os.environ.get(DATASET_ENV)
    return Path(root) if root else None


def index_dataset(dataset_dir, scale: int) -> DatasetIndex:
    """Pair HR files with LR partners under the conventional layout."""
    dataset_dir = Path(dataset_dir)
    hr_dir = dataset_dir / "HR"
    lr_dir = dataset_dir / "LR_bicubic" / f"X{scale}"
    if not hr_dir.is_dir():
        raise DatasetError(f"no HR/ directory under {dataset_dir}")
    hr_files = sorted(hr_dir.glob("*.png"))
    if not hr_files:
        raise DatasetError(f"no PNG files in {hr_dir}")
    if not lr_dir.is_dir():
        raise DatasetError(f"no LR directory {lr_dir}")
    records = []
    for hr in hr_files:
        candidates = [lr_dir / hr.name, lr_dir / f"{hr.stem}x{scale}.png"]
        lr = next((c for c in candidates if c.is_file()), None)
        if lr is None:
            raise DatasetError(f"missing LR partner for {hr.name} in {lr_dir}")
        records.append((hr, lr))
    return DatasetIndex(name=dataset_dir.name, scale=scale, records=tuple(records))


def check_pair_dims(hr_shape, lr_shape, scale: int) -> bool:
    """LR dims must equal ceil(HR dims / scale)."""
    return all(-(-h // scale) == l for h, l in zip(hr_shape[:2], lr_shape[:2]))


def make_lr(hr_image, scale: int) -> np.ndarray:
    """Antialiased bicubic downscale for self-contained fixtures."""
    if scale not in (2, 4):
        raise ValueError(f"scale must be 2 or 4, got {scale}")
    arr = np.asarray(hr_image, dtype=np.uint8)
    if arr.ndim == 3:
        return np.stack([downscale_antialiased(arr[..., c], scale)
                         for c in range(arr.shape[2])], axis=-1)
    return downscale_antialiased(arr, scale)
