import numpy as np
import pytest

from hklut_trainer import TrainConfig, train


def textured_planes(rng, count=6, size=64):
    """Synthetic HR planes with edges, gradients, and noise."""
    planes = []
    for _ in range(count):
        y, x = np.indices((size, size))
        img = (128 + 60 * np.sin(x / rng.uniform(2, 6))
               * np.cos(y / rng.uniform(2, 6))
               + 40 * ((x + y) % rng.integers(8, 16) < 4)
               + rng.normal(0, 8, (size, size)))
        planes.append(np.clip(img, 0, 255).astype(np.uint8))
    return planes


@pytest.fixture(scope="session")
def hr_planes():
    return textured_planes(np.random.default_rng(0))


@pytest.fixture(scope="session")
def desk_trained(hr_planes):
    """Briefly trained model shared across tests (small crops for speed)."""
    cfg = TrainConfig.desk_scale(iterations=120, milestones=(60, 90),
                                 crop=8, batch_size=4, seed=1)
    return train(cfg, hr_planes)
