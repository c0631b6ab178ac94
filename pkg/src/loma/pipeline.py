"""Batch processing of an image directory with a deterministic worker pool.

Work items are ordered by sorted source filename; item i always draws from
the stream derived from (master seed, i). Every output byte is therefore a
pure function of (inputs, config, seed), independent of worker count and
completion order. Workers share nothing but the append-only report, which
is assembled in the parent process.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .config import LomaConfig
from .images import IMAGE_SUFFIXES, load_image, save_png
from .rng import RngStream
from .sampling import maybe_augment


@dataclass(frozen=True)
class WorkItem:
    index: int
    source: Path
    sink: Path


@dataclass
class ItemRecord:
    index: int
    path: str
    applied: bool
    spec: dict | None
    ms: float
    error: str | None = None

    def to_dict(self) -> dict:
        d = {
            "index": self.index,
            "path": self.path,
            "applied": self.applied,
            "spec": self.spec,
            "ms": round(self.ms, 3),
        }
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class RunReport:
    items: list[ItemRecord] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def applied_count(self) -> int:
        return sum(1 for it in self.items if it.applied)

    @property
    def failures(self) -> list[ItemRecord]:
        return [it for it in self.items if it.error is not None]

    @property
    def images_per_s(self) -> float:
        return len(self.items) / self.seconds if self.seconds > 0 else 0.0


def plan_items(input_dir, output_dir) -> list[WorkItem]:
    """Enumerate inputs in sorted-name order and assign stable indices.

    Output names keep the input filename, with ".png" appended for
    non-PNG inputs so distinct sources can never collide.
    """
    input_dir = Path(input_dir)
    output_dir = Path(output_dir)
    if not input_dir.is_dir():
        raise FileNotFoundError(f"input directory not found: {input_dir}")
    sources = sorted(
        p for p in input_dir.iterdir()
        if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES
    )
    if not sources:
        raise FileNotFoundError(f"no PNG/JPEG files in {input_dir}")
    items = []
    for i, src in enumerate(sources):
        name = src.name if src.suffix.lower() == ".png" else src.name + ".png"
        items.append(WorkItem(index=i, source=src, sink=output_dir / name))
    return items


def process_item(item: WorkItem, cfg: LomaConfig, master_seed: int) -> ItemRecord:
    """Process one image; decode failures are reported, not raised."""
    start = time.perf_counter()
    try:
        img = load_image(item.source)
        rng = RngStream.for_item(master_seed, item.index)
        out, spec = maybe_augment(img, cfg, rng)
        save_png(item.sink, out)
    except Exception as e:  # per-file failures must not kill the batch
        return ItemRecord(
            index=item.index,
            path=str(item.source),
            applied=False,
            spec=None,
            ms=(time.perf_counter() - start) * 1e3,
            error=f"{type(e).__name__}: {e}",
        )
    return ItemRecord(
        index=item.index,
        path=str(item.source),
        applied=spec is not None,
        spec=spec.to_dict() if spec is not None else None,
        ms=(time.perf_counter() - start) * 1e3,
    )


def _process_star(args) -> ItemRecord:
    return process_item(*args)


def run_batch(
    input_dir,
    output_dir,
    cfg: LomaConfig,
    master_seed: int = 0,
    workers: int = 1,
) -> RunReport:
    """Augment every image in input_dir into output_dir as PNG.

    Outputs and the report are byte-identical for any worker count.
    """
    items = plan_items(input_dir, output_dir)
    Path(output_dir).mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    if workers <= 1:
        records = [process_item(it, cfg, master_seed) for it in items]
    else:
        tasks = [(it, cfg, master_seed) for it in items]
        chunk = max(1, len(tasks) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_process_star, tasks, chunksize=chunk))
    records.sort(key=lambda rec: rec.index)
    return RunReport(items=records, seconds=time.perf_counter() - start)
