"""Batch command-line front end for the LUT super-resolution engine."""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from . import bench as bench_mod
from . import fileformat, verify
from .data import DATASET_ENV, default_dataset_root, index_dataset, make_lr, read_png, write_png
from .engine import model_forward_tiled
from .evaluate import CLASSICAL_METHODS, evaluate_dataset, upscale_image
from .metrics import rgb_to_ycbcr, ycbcr_to_rgb
from .model import (ModelSpec, constant_table, format_size, lut_size_bytes,
                    preset_model, zero_table)
from .reference import build_lut_from_function


@click.group()
def main():
    """Integer lookup-table super-resolution toolkit."""


def _load(model_path) -> ModelSpec:
    try:
        return fileformat.load_model_file(model_path)
    except (OSError, ValueError) as exc:
        raise click.ClickException(f"cannot load {model_path}: {exc}")


@main.command()
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", "-o", type=click.Path(file_okay=False), default="sr_out",
              show_default=True)
@click.option("--channels", type=click.Choice(["rgb", "y"]), default="rgb",
              show_default=True, help="Super-resolve each RGB plane, or only "
              "luma with interpolated chroma.")
@click.option("--threads", type=int, default=1, show_default=True)
def upscale(model_path, inputs, out_dir, channels, threads):
    """Super-resolve PNG images with a .hklut model."""
    model = _load(model_path)
    out_dir = Path(out_dir)
    for path in inputs:
        img = read_png(path)
        if channels == "y" and img.ndim == 3:
            ycc = rgb_to_ycbcr(img)
            scale = model.total_upscale
            mode = model.stages[0].residual_mode if model.stages else "nearest"
            sr_y = model_forward_tiled(ycc[..., 0], model, threads)
            chroma = [upscale_image(ycc[..., c], mode, scale) for c in (1, 2)]
            sr = ycbcr_to_rgb(np.stack([sr_y, *chroma], axis=-1))
        else:
            sr = upscale_image(img, model, model.total_upscale, threads)
        out_path = out_dir / Path(path).name
        write_png(sr, out_path)
        click.echo(f"{path} -> {out_path} ({sr.shape[1]}x{sr.shape[0]})")


@main.command("eval")
@click.argument("dataset", type=str)
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False),
              help="Evaluate a .hklut model.")
@click.option("--method", type=click.Choice(CLASSICAL_METHODS),
              help="Evaluate a classical baseline instead of a model.")
@click.option("--scale", type=int, default=4, show_default=True)
@click.option("--root", type=click.Path(file_okay=False),
              help=f"Dataset root (default: ${DATASET_ENV}).")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False),
              help="Also write machine-readable `dataset image metric value` lines.")
@click.option("--energy-config", type=click.Path(exists=True, dir_okay=False),
              help="TOML file overriding the per-op energy cost table.")
def eval_cmd(dataset, model_path, method, scale, root, threads, report_path,
             energy_config):
    """PSNR/SSIM of a model or baseline over an HR/LR dataset."""
    if (model_path is None) == (method is None):
        raise click.ClickException("pass exactly one of --model or --method")
    root = Path(root) if root else default_dataset_root()
    if root is None:
        raise click.ClickException(f"no dataset root: pass --root or set ${DATASET_ENV}")
    dataset_dir = root / dataset
    if not dataset_dir.is_dir():
        raise click.ClickException(f"dataset directory not found: {dataset_dir}")
    try:
        index = index_dataset(dataset_dir, scale)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    runner = _load(model_path) if model_path else method
    report = evaluate_dataset(index, runner, threads=threads)
    if model_path:
        hr0 = read_png(index.records[0][0])
        costs = (bench_mod.EnergyCosts.from_toml(energy_config)
                 if energy_config else bench_mod.EnergyCosts())
        h = hr0.shape[0] - hr0.shape[0] % scale
        w = hr0.shape[1] - hr0.shape[1] % scale
        bench_mod.attach_cost_summary(report, runner, h, w, costs)
    for line in report.lines():
        click.echo(line)
    if report_path:
        Path(report_path).write_text("\n".join(report.kv_lines()) + "\n")


@main.command()
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
def size(model_path):
    """Exact LUT storage of a model file."""
    model = _load(model_path)
    total = lut_size_bytes(model)
    click.echo(f"{total} B ({format_size(total)})")


@main.command()
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
def inspect(model_path):
    """Per-table breakdown of a model file."""
    click.echo(fileformat.inspect(_load(model_path)))


@main.command("verify")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False),
              help="Verify a specific model (default: fresh random models).")
@click.option("--random", "random_n", type=int, default=10, show_default=True,
              help="Number of random (model, image) cases.")
@click.option("--seed", type=int, default=0, show_default=True)
def verify_cmd(model_path, random_n, seed):
    """Cross-check the engine against the naive reference."""
    model = _load(model_path) if model_path else None
    failures = verify.run_verification(model=model, random_n=random_n, seed=seed)
    if failures:
        for failure in failures:
            click.echo(f"FAIL {failure}", err=True)
        sys.exit(1)
    click.echo(f"ok: {random_n} randomized cases passed (seed {seed})")


@main.command("make-ref-lut")
@click.argument("kind", type=str)
@click.argument("out_path", type=click.Path(dir_okay=False))
@click.option("--arch", type=click.Choice(["hklut-s", "hklut-l"]), default="hklut-s",
              show_default=True)
@click.option("--residual", type=click.Choice(["nearest", "bilinear", "bicubic"]),
              default="nearest", show_default=True)
def make_ref_lut(kind, out_path, arch, residual):
    """Emit an analytic model file: KIND is `zero`, `constant:<c>` or `diff`."""
    if kind == "zero":
        table_fn = zero_table
    elif kind.startswith("constant:"):
        value = int(kind.split(":", 1)[1])
        def table_fn(v, n, r, _c=value):
            return constant_table(v, n, r, _c)
    elif kind == "diff":
        # clamped signed difference of the first two gathered pixels
        def table_fn(v, n, r):
            def f(values):
                d = values[0] - values[1] if n > 1 else 0
                d = max(-127, min(127, d))
                return np.full((r, r), d, dtype=np.int64)
            return build_lut_from_function(f, v, n, r)
    else:
        raise click.ClickException(f"unknown kind {kind!r} "
                                   "(use zero, constant:<c> or diff)")
    model = preset_model(arch, table_fn=table_fn, residual_mode=residual)
    count = fileformat.save_model_file(model, out_path)
    click.echo(f"wrote {out_path}: {count} B file, "
               f"{format_size(lut_size_bytes(model))} of entries")


@main.command("bench")
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--height", type=int, default=360, show_default=True)
@click.option("--width", type=int, default=640, show_default=True)
@click.option("--repeats", type=int, default=10, show_default=True)
@click.option("--energy-config", type=click.Path(exists=True, dir_okay=False))
def bench_cmd(model_path, height, width, repeats, energy_config):
    """Wall-clock and theoretical op/energy cost at a given input size."""
    model = _load(model_path)
    mean, std, _ = bench_mod.bench_runtime(model, height, width, repeats)
    scale = model.total_upscale
    ops = bench_mod.estimate_ops(model, height * scale, width * scale)
    costs = (bench_mod.EnergyCosts.from_toml(energy_config)
             if energy_config else bench_mod.EnergyCosts())
    click.echo(f"{width}x{height} -> {width * scale}x{height * scale}, "
               f"{repeats} runs: {mean:.1f} ms +/- {std:.1f} ms")
    click.echo(f"lookups {ops.lookups}  int8 adds {ops.int8_adds}  "
               f"int32 adds {ops.int32_adds}  float ops {ops.float_ops}")
    click.echo(f"estimated energy {ops.energy_pj(costs) / 1e6:.3f} uJ")


@main.command("make-lr")
@click.argument("inputs", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", "-o", type=click.Path(file_okay=False), required=True)
@click.option("--scale", type=click.Choice(["2", "4"]), default="4", show_default=True)
def make_lr_cmd(inputs, out_dir, scale):
    """Generate fallback LR fixtures (NOT the official degradations)."""
    scale = int(scale)
    for path in inputs:
        lr = make_lr(read_png(path), scale)
        out_path = Path(out_dir) / f"{Path(path).stem}x{scale}.png"
        write_png(lr, out_path)
        click.echo(f"{path} -> {out_path}")


if __name__ == "__main__":
    main()
