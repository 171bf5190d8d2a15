"""Training loop: seeded, reproducible, with divergence diagnostics."""

import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch.nn import functional as F

from .floatmodel import FloatModel


class TrainDivergence(RuntimeError):
    pass


@dataclass
class TrainConfig:
    arch: str = "hklut-s"
    iterations: int = 200_000
    milestones: tuple = (100_000, 150_000)
    lr: float = 5e-4
    batch_size: int = 16
    crop: int = 48          # LR crop side
    seed: int = 0
    residual_mode: str = "nearest"
    augment: bool = True

    def __post_init__(self):
        if any(m >= self.iterations for m in self.milestones):
            raise ValueError("schedule milestones must precede total iterations")

    @classmethod
    def desk_scale(cls, **overrides):
        """Small-budget default: 10k iterations, milestones scaled to match."""
        cfg = dict(iterations=10_000)
        cfg.update(overrides)
        if "milestones" not in cfg:
            its = cfg["iterations"]
            cfg["milestones"] = (its // 2, its * 3 // 4)
        return cls(**cfg)


def load_hr_images(root, limit=None):
    """Grayscale-plane list from a dataset's HR/ directory (RGB channels split)."""
    hr_dir = Path(root) / "HR"
    paths = sorted(hr_dir.iterdir()) if hr_dir.is_dir() else []
    paths = [p for p in paths if p.suffix.lower() == ".png"]
    if limit:
        paths = paths[:limit]
    planes = []
    for path in paths:
        arr = np.asarray(Image.open(path).convert("RGB"), dtype=np.uint8)
        planes.extend(arr[..., c] for c in range(3))
    if not planes:
        raise FileNotFoundError(f"no HR PNGs under {hr_dir}")
    return planes


def make_lr_tensor(hr, scale):
    """Antialiased degradation of an HR batch tensor, rounded to 8-bit values."""
    lr = F.interpolate(hr, scale_factor=1 / scale, mode="bicubic",
                       antialias=True, align_corners=False)
    return torch.round(torch.clamp(lr, 0.0, 255.0))


def sample_batch(planes, cfg, scale, rng):
    """(lr, hr) float tensors of shape (B, 1, c, c) and (B, 1, c*s, c*s)."""
    hr_crop = cfg.crop * scale
    crops = []
    for _ in range(cfg.batch_size):
        plane = planes[rng.integers(len(planes))]
        h, w = plane.shape
        if h < hr_crop or w < hr_crop:
            raise ValueError(f"HR image {h}x{w} smaller than crop {hr_crop}")
        y = int(rng.integers(h - hr_crop + 1))
        x = int(rng.integers(w - hr_crop + 1))
        crop = plane[y:y + hr_crop, x:x + hr_crop]
        if cfg.augment:
            crop = np.rot90(crop, int(rng.integers(4)))
            if rng.integers(2):
                crop = np.flipud(crop)
        crops.append(np.ascontiguousarray(crop, dtype=np.float32))
    hr = torch.from_numpy(np.stack(crops))[:, None]
    return make_lr_tensor(hr, scale), hr


def train(cfg, planes, log_every=0):
    """Train a FloatModel; returns (model, loss curve)."""
    torch.manual_seed(cfg.seed)
    random.seed(cfg.seed)
    rng = np.random.default_rng(cfg.seed)
    model = FloatModel(cfg.arch, cfg.residual_mode)
    scale = model.scale
    opt = torch.optim.Adam(model.parameters(), lr=cfg.lr,
                           betas=(0.9, 0.999), eps=1e-8)
    sched = torch.optim.lr_scheduler.MultiStepLR(
        opt, milestones=list(cfg.milestones), gamma=0.1)
    losses = []
    for it in range(cfg.iterations):
        lr_imgs, hr_imgs = sample_batch(planes, cfg, scale, rng)
        opt.zero_grad()
        loss = F.mse_loss(model(lr_imgs) / 255.0, hr_imgs / 255.0)
        if not torch.isfinite(loss):
            raise TrainDivergence(
                f"non-finite loss at iteration {it} "
                f"(lr={sched.get_last_lr()[0]:g}, last finite losses "
                f"{[f'{v:.4g}' for v in losses[-5:]]})")
        loss.backward()
        opt.step()
        sched.step()
        losses.append(loss.item())
        if log_every and (it + 1) % log_every == 0:
            print(f"iter {it + 1}/{cfg.iterations}  loss {float(loss):.6f}")
    return model, losses


def save_checkpoint(model, cfg, losses, path):
    torch.save({"arch": cfg.arch, "residual_mode": cfg.residual_mode,
                "config": vars(cfg), "losses": losses,
                "state_dict": model.state_dict()}, path)


def load_checkpoint(path):
    ckpt = torch.load(path, map_location="cpu", weights_only=False)
    model = FloatModel(ckpt["arch"], ckpt["residual_mode"])
    model.load_state_dict(ckpt["state_dict"])
    return model, ckpt
