"""Command-line interface.

Structured output is line-delimited JSON on stdout; diagnostics go to
stderr. Exit codes: 0 success, 1 usage, 2 I/O, 3 validation. Every
subcommand that takes --seed falls back to the LOMA_SEED environment
variable, then to 0, so reruns are reproducible by default.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, FeatureAugConfig, LomaConfig, PRESETS, load_config, preset
from .features import feature_augment, feature_offset, loma_f
from .geometry import Interp, Shape, region_source_grid
from .images import load_image, save_png
from .pipeline import run_batch
from .rng import RngStream
from .sampling import maybe_augment, sample_spec
from .tensorfile import TensorFileError, read_tensor, write_tensor

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VALIDATION = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse defaults to exit code 2; the CLI contract reserves 1
        # for usage errors.
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def _resolve_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("LOMA_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"LOMA_SEED: not an integer: {env!r}") from None


def _resolve_config(ns) -> tuple[LomaConfig, FeatureAugConfig]:
    if getattr(ns, "preset", None) is not None:
        return preset(ns.preset)
    if getattr(ns, "config", None) is not None:
        return load_config(Path(ns.config))
    return LomaConfig(), FeatureAugConfig()


def _config_echo(cfg: LomaConfig, fcfg: FeatureAugConfig) -> dict:
    doc = cfg.to_dict()
    doc["feature"] = fcfg.to_dict()
    return doc


# ---------------------------------------------------------------- augment


def _cmd_augment(ns) -> int:
    cfg, fcfg = _resolve_config(ns)
    seed = _resolve_seed(ns.seed)
    report = run_batch(ns.indir, ns.outdir, cfg, master_seed=seed, workers=ns.jobs)
    _emit(
        {
            "event": "header",
            "command": "augment",
            "config": _config_echo(cfg, fcfg),
            "seed": seed,
            "jobs": ns.jobs,
            "items": len(report.items),
        }
    )
    for rec in report.items:
        _emit({"event": "item", **rec.to_dict()})
    _emit(
        {
            "event": "summary",
            "items": len(report.items),
            "applied": report.applied_count,
            "failed": len(report.failures),
            "seconds": round(report.seconds, 3),
            "images_per_s": round(report.images_per_s, 2),
        }
    )
    if report.failures:
        print(f"{len(report.failures)} file(s) failed; see report", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# ---------------------------------------------------------------- preview


def _overlay_boundary(img: np.ndarray, spec) -> np.ndarray:
    """Draw the region boundary (in-region pixels with an outside or
    off-image 4-neighbor) in a contrasting color."""
    height, width = img.shape[:2]
    rows, cols, _, _ = region_source_grid(spec, width, height)
    inside = np.zeros((height, width), dtype=bool)
    inside[rows, cols] = True
    padded = np.pad(inside, 1, constant_values=False)
    eroded = (
        padded[1:-1, 1:-1]
        & padded[:-2, 1:-1]
        & padded[2:, 1:-1]
        & padded[1:-1, :-2]
        & padded[1:-1, 2:]
    )
    boundary = inside & ~eroded
    out = img.copy()
    if img.shape[2] >= 3:
        out[boundary, 0] = 255
        out[boundary, 1] = 0
        out[boundary, 2] = 0
    else:
        out[boundary, 0] = 255 - out[boundary, 0]
    return out


def _compose_grid(tiles: list[np.ndarray]) -> np.ndarray:
    n = len(tiles)
    ncols = math.ceil(math.sqrt(n))
    nrows = math.ceil(n / ncols)
    h, w, c = tiles[0].shape
    grid = np.zeros((nrows * h, ncols * w, c), dtype=np.uint8)
    for k, tile in enumerate(tiles):
        r, col = divmod(k, ncols)
        grid[r * h : (r + 1) * h, col * w : (col + 1) * w] = tile
    return grid


def _cmd_preview(ns) -> int:
    cfg = LomaConfig(p=1.0)
    if ns.shape is not None:
        cfg = replace(cfg, shape=Shape(ns.shape))
    seed = _resolve_seed(ns.seed)
    img = load_image(ns.inpath)
    out_path = Path(ns.outpath)

    variants = []
    for k in range(ns.n):
        rng = RngStream.for_item(seed, k)
        out, spec = maybe_augment(img, cfg, rng)
        if ns.overlay:
            out = _overlay_boundary(out, spec)
        variants.append(out)
        _emit({"event": "variant", "index": k, "spec": spec.to_dict()})

    if out_path.is_dir():
        stem = Path(ns.inpath).stem
        for k, v in enumerate(variants):
            save_png(out_path / f"{stem}_aug{k:03d}.png", v)
    else:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        save_png(out_path, variants[0] if ns.n == 1 else _compose_grid(variants))
    return EXIT_OK


# ---------------------------------------------------------------- feature


def _cmd_feature(ns) -> int:
    cfg, fcfg = _resolve_config(ns)
    seed = _resolve_seed(ns.seed)
    fm = read_tensor(ns.inpath)
    rng = RngStream.for_item(seed, 0)
    if ns.op == "loma":
        out = loma_f(fm, cfg, rng)
    elif ns.op == "offset":
        out = feature_offset(fm, fcfg.gamma, rng)
    else:
        # Explicitly requested, so the mini-batch gate is forced open.
        out = feature_augment(fm, cfg, replace(fcfg, p_f=1.0), rng)
    write_tensor(ns.outpath, out)
    _emit(
        {
            "event": "feature",
            "op": ns.op,
            "dims": list(fm.shape),
            "seed": seed,
            "out": str(ns.outpath),
        }
    )
    return EXIT_OK


# ---------------------------------------------------------------- sample


def _cmd_sample(ns) -> int:
    cfg, _ = _resolve_config(ns)
    seed = _resolve_seed(ns.seed)
    for i in range(ns.count):
        rng = RngStream.for_item(seed, i)
        applied = rng.uniform() < cfg.p  # the gate draw, kept stream-aligned
        spec = sample_spec(rng, cfg, ns.width, ns.height)
        _emit(
            {
                "event": "spec",
                "index": i,
                "applied": applied,
                "spec": spec.to_dict(),
            }
        )
    return EXIT_OK


# ---------------------------------------------------------------- bench


def _synth_image(index: int, width: int, height: int) -> np.ndarray:
    base = (
        np.arange(height, dtype=np.intp)[:, None]
        + np.arange(width, dtype=np.intp)[None, :]
        + 7 * index
    ) % 256
    return np.repeat(base[:, :, None], 3, axis=2).astype(np.uint8)


def _bench_chunk(args) -> int:
    start, stop, width, height, interp_value = args
    cfg = LomaConfig(p=1.0, interp=Interp(interp_value))
    for i in range(start, stop):
        img = _synth_image(i, width, height)
        rng = RngStream.for_item(0, i)
        maybe_augment(img, cfg, rng)
    return stop - start


def _cmd_bench(ns) -> int:
    def timed(jobs: int) -> float:
        start = time.perf_counter()
        if jobs <= 1:
            _bench_chunk((0, ns.iters, ns.width, ns.height, ns.interp))
        else:
            bounds = np.linspace(0, ns.iters, jobs * 4 + 1, dtype=int)
            tasks = [
                (int(lo), int(hi), ns.width, ns.height, ns.interp)
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            ]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                list(pool.map(_bench_chunk, tasks))
        return time.perf_counter() - start

    def record(jobs: int, seconds: float) -> dict:
        rate = ns.iters / seconds if seconds > 0 and ns.iters else 0.0
        per_img_us = seconds / ns.iters * 1e6 if ns.iters else 0.0
        return {
            "event": "bench",
            "workers": jobs,
            "iters": ns.iters,
            "width": ns.width,
            "height": ns.height,
            "interp": ns.interp,
            "seconds": round(seconds, 4),
            "images_per_s": round(rate, 2),
            "us_per_image": round(per_img_us, 1),
        }

    t1 = timed(1)
    _emit(record(1, t1))
    if ns.jobs > 1:
        tj = timed(ns.jobs)
        _emit(record(ns.jobs, tj))
        _emit(
            {
                "event": "bench_ratio",
                "jobs": ns.jobs,
                "speedup": round(t1 / tj, 3) if tj > 0 else 0.0,
            }
        )
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loma", description="Local magnification augmentation")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        group = p.add_mutually_exclusive_group()
        group.add_argument("--config", metavar="FILE", help="JSON config file")
        group.add_argument("--preset", choices=PRESETS, help="named preset")

    p = sub.add_parser("augment", help="augment a directory of images", parents=[])
    p.add_argument("--in", dest="indir", required=True, metavar="DIR")
    p.add_argument("--out", dest="outdir", required=True, metavar="DIR")
    add_config_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("preview", help="write augmented variants of one image")
    p.add_argument("--in", dest="inpath", required=True, metavar="IMG")
    p.add_argument("--out", dest="outpath", required=True, metavar="IMG_OR_DIR")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--overlay", action="store_true")
    p.add_argument("--shape", choices=[s.value for s in Shape], default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_preview)

    p = sub.add_parser("feature", help="augment a feature-map tensor file")
    p.add_argument("--op", choices=["loma", "offset", "both"], required=True)
    p.add_argument("--in", dest="inpath", required=True, metavar="TNSR")
    p.add_argument("--out", dest="outpath", required=True, metavar="TNSR")
    add_config_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_feature)

    p = sub.add_parser("sample", help="print the specs a batch run would use")
    add_config_flags(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("bench", help="measure transform throughput")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument(
        "--interp", choices=[i.value for i in Interp], default=Interp.BILINEAR.value
    )
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except ConfigError as e:
        print(f"loma: config error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except TensorFileError as e:
        print(f"loma: tensor file error: {e}", file=sys.stderr)
        return EXIT_IO
    except FileNotFoundError as e:
        print(f"loma: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"loma: i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"loma: invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
