import numpy as np
import pytest

from hklut.data import make_lr, write_png


def textured_image(rng, h, w):
    """Synthetic HR content with edges and gradients (not pure noise)."""
    yy, xx = np.mgrid[0:h, 0:w]
    img = (128 + 80 * np.sin(xx / 7.0) * np.cos(yy / 5.0)
           + 40 * ((xx // 16 + yy // 16) % 2)
           + rng.normal(0, 6, size=(h, w)))
    return np.clip(img, 0, 255).astype(np.uint8)


@pytest.fixture(scope="session")
def synthetic_dataset(tmp_path_factory):
    """Five-image HR/LR_bicubic/X4 layout with self-generated LR files."""
    rng = np.random.default_rng(7)
    root = tmp_path_factory.mktemp("datasets")
    ds = root / "SynthA"
    for i in range(5):
        hr = np.stack([textured_image(rng, 96 + 8 * i, 104) for _ in range(3)], axis=-1)
        write_png(hr, ds / "HR" / f"img{i}.png")
        write_png(make_lr(hr, 4), ds / "LR_bicubic" / "X4" / f"img{i}x4.png")
    return root
