"""Command-line entry points: train, export, verify-export, erf."""

from pathlib import Path

import click
import numpy as np
from PIL import Image

from .erf import compute_erf, effective_radius
from .export import export_model, verify_export
from .train import (TrainConfig, load_checkpoint, load_hr_images,
                    save_checkpoint, train)


@click.group()
def main():
    """Train and export hybrid-lookup-table super-resolution models."""


@main.command("train")
@click.argument("dataset", type=click.Path(exists=True, file_okay=False))
@click.option("-o", "--out", "out_path", required=True,
              type=click.Path(dir_okay=False), help="checkpoint output path")
@click.option("--arch", default="hklut-s", show_default=True)
@click.option("--iterations", default=10_000, show_default=True,
              help="training iterations (small-budget default)")
@click.option("--crop", default=48, show_default=True)
@click.option("--batch-size", default=16, show_default=True)
@click.option("--subset", default=0, help="train on the first N HR images only")
@click.option("--seed", default=0, show_default=True)
@click.option("--log-every", default=500, show_default=True)
def cmd_train(dataset, out_path, arch, iterations, crop, batch_size, subset,
              seed, log_every):
    """Train on the HR images of DATASET (directory with an HR/ subfolder)."""
    cfg = TrainConfig.desk_scale(arch=arch, iterations=iterations, crop=crop,
                                 batch_size=batch_size, seed=seed)
    planes = load_hr_images(dataset, limit=subset or None)
    model, losses = train(cfg, planes, log_every=log_every)
    save_checkpoint(model, cfg, losses, out_path)
    click.echo(f"final loss {losses[-1]:.6f}; checkpoint written to {out_path}")


@main.command("export")
@click.argument("checkpoint", type=click.Path(exists=True, dir_okay=False))
@click.argument("out_path", type=click.Path(dir_okay=False))
def cmd_export(checkpoint, out_path):
    """Quantize a checkpoint into a .hklut model file."""
    model, _ = load_checkpoint(checkpoint)
    export_model(model, out_path)
    click.echo(f"wrote {Path(out_path).stat().st_size} B to {out_path}")


@main.command("verify-export")
@click.argument("checkpoint", type=click.Path(exists=True, dir_okay=False))
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--images", default=20, show_default=True,
              help="number of random test images")
@click.option("--seed", default=0, show_default=True)
@click.option("--threshold", default=3, show_default=True,
              help="max allowed per-stage deviation in gray levels")
def cmd_verify_export(checkpoint, model_path, images, seed, threshold):
    """Compare float forward vs exported integer forward, per stage."""
    model, _ = load_checkpoint(checkpoint)
    rng = np.random.default_rng(seed)
    samples = [rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
               for _ in range(images)]
    devs = verify_export(model, model_path, samples)
    for i, dev in enumerate(devs):
        click.echo(f"stage {i}: max deviation {dev} gray levels")
    if max(devs) > threshold:
        raise click.ClickException(
            f"deviation {max(devs)} exceeds threshold {threshold}")
    click.echo("ok")


@main.command("erf")
@click.argument("checkpoint", type=click.Path(exists=True, dir_okay=False))
@click.argument("image", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out-prefix", required=True,
              help="output path prefix; writes <prefix>-msb.png and <prefix>-lsb.png")
@click.option("--region", nargs=2, type=int, default=None,
              help="output-space y x of the 4x4 region (default: center)")
def cmd_erf(checkpoint, image, out_prefix, region):
    """Render first-stage MSB/LSB effective-receptive-field maps."""
    model, _ = load_checkpoint(checkpoint)
    stage = model.stages[0]
    arr = np.asarray(Image.open(image).convert("L"), dtype=np.uint8)
    msb_plane, lsb_plane = arr >> 4, arr & 15
    r = stage.r
    if region is None:
        region = (arr.shape[0] * r // 2, arr.shape[1] * r // 2)
    reg = (region[0], region[1], 4)
    for tag, nets, names, plane in (
            ("msb", stage.msb_nets, stage.msb_names, msb_plane),
            ("lsb", stage.lsb_nets, stage.lsb_names, lsb_plane)):
        erf = compute_erf(nets, names, plane, reg, r)
        path = f"{out_prefix}-{tag}.png"
        Image.fromarray((erf * 255).astype(np.uint8)).save(path)
        click.echo(f"{tag}: effective radius {effective_radius(erf):.2f} px "
                   f"-> {path}")
