"""End-to-end command-line flow: train -> export -> verify-export -> erf."""

import numpy as np
import pytest
from click.testing import CliRunner
from PIL import Image

from hklut_trainer.cli import main


@pytest.fixture
def dataset_dir(tmp_path, hr_planes):
    root = tmp_path / "Synth"
    (root / "HR").mkdir(parents=True)
    for i, plane in enumerate(hr_planes[:2]):
        Image.fromarray(plane).save(root / "HR" / f"img{i}.png")
    return root


def test_full_cli_flow(tmp_path, dataset_dir):
    runner = CliRunner()
    ckpt = tmp_path / "ckpt.pt"
    result = runner.invoke(main, ["train", str(dataset_dir), "-o", str(ckpt),
                                  "--iterations", "20", "--crop", "8",
                                  "--batch-size", "2", "--log-every", "0"],
                           catch_exceptions=False)
    assert result.exit_code == 0 and "checkpoint written" in result.output

    model_path = tmp_path / "m.hklut"
    result = runner.invoke(main, ["export", str(ckpt), str(model_path)],
                           catch_exceptions=False)
    assert result.exit_code == 0
    assert model_path.stat().st_size == 102_400 + 86  # tables + headers

    result = runner.invoke(main, ["verify-export", str(ckpt), str(model_path),
                                  "--images", "5"], catch_exceptions=False)
    assert result.exit_code == 0 and "ok" in result.output

    img = tmp_path / "probe.png"
    Image.fromarray(np.random.default_rng(0).integers(
        0, 256, (16, 16), dtype=np.uint8)).save(img)
    result = runner.invoke(main, ["erf", str(ckpt), str(img),
                                  "-o", str(tmp_path / "erf")],
                           catch_exceptions=False)
    assert result.exit_code == 0
    assert (tmp_path / "erf-msb.png").exists()
    assert (tmp_path / "erf-lsb.png").exists()


def test_exported_model_usable_by_engine_cli(tmp_path, dataset_dir):
    """The artifact is consumable by the engine's own command-line tool."""
    from hklut.cli import main as engine_main
    runner = CliRunner()
    ckpt = tmp_path / "ckpt.pt"
    runner.invoke(main, ["train", str(dataset_dir), "-o", str(ckpt),
                         "--iterations", "5", "--crop", "6",
                         "--batch-size", "1", "--log-every", "0"],
                  catch_exceptions=False)
    model_path = tmp_path / "m.hklut"
    runner.invoke(main, ["export", str(ckpt), str(model_path)],
                  catch_exceptions=False)
    result = runner.invoke(engine_main, ["size", str(model_path)],
                           catch_exceptions=False)
    assert result.exit_code == 0 and "100.0 KB" in result.output
