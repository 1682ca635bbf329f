"""Reproducible runs: one global seed, fixed per-stage seeds, replayable manifests.

Stage seeds are derived as
``SeedSequence([global_seed, STAGES[stage]]).generate_state(1)[0]``, so any
stage can be re-run alone and still draw the same numbers.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .binpack import TABLE1, benchmark, build_model, load_instance, save_instance
from .breakers import PROFILES, Template, load_family, make_family, save_family
from .solver import compare, write_stats_csv
from .verify import DEFAULT_ORBIT_GUARD, DEFAULT_POINT_GUARD

__all__ = ["STAGES", "stage_seed", "RunManifest", "run_manifest", "file_digest"]

STAGES = {"bench": 0, "breakers": 1, "solve": 2, "verify": 3}


def stage_seed(global_seed: int, stage: str) -> int:
    return int(np.random.SeedSequence([int(global_seed), STAGES[stage]]).generate_state(1)[0])


@dataclass
class RunManifest:
    seed: int
    classes: int = 3
    items: int | None = None
    capacity: int = 100
    template: str = "XY"
    profile: str = "few_few"
    perm_count: int | None = None
    generator_product_length: int = 50
    solve: bool = False
    guard_settings: dict = field(default_factory=lambda: {"points": DEFAULT_POINT_GUARD, "orbit": DEFAULT_ORBIT_GUARD})
    outputs: dict = field(default_factory=lambda: {"instance": "instance.json", "family": "family.json", "stats": "stats.csv"})
    tool_version: str = __version__

    @property
    def instance_file(self) -> str:
        return self.outputs["instance"]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def read(cls, path: str | Path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))


def run_manifest(manifest: RunManifest, out_dir: str | Path) -> dict[str, Path]:
    """Run bench, breakers and (optionally) solve into ``out_dir``; returns written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if manifest.classes not in TABLE1:
        raise ValueError(f"unknown class {manifest.classes}")
    written: dict[str, Path] = {}
    inst = benchmark(manifest.classes, stage_seed(manifest.seed, "bench"), manifest.capacity, manifest.items)
    written["instance"] = out / manifest.outputs["instance"]
    save_instance(inst, written["instance"])
    inst = load_instance(written["instance"])

    profile = PROFILES[manifest.profile].scaled(generator_product_length=manifest.generator_product_length)
    if manifest.perm_count is not None:
        profile = profile.scaled(perm_count=manifest.perm_count)
    fam = make_family(inst, Template(manifest.template), profile, stage_seed(manifest.seed, "breakers"))
    written["family"] = out / manifest.outputs["family"]
    written["breakers"] = save_family(fam, written["family"])

    if manifest.solve:
        rows = compare(build_model(inst), [load_family(written["family"])])
        written["stats"] = out / manifest.outputs["stats"]
        write_stats_csv(rows, written["stats"])
    manifest.write(out / "manifest.json")
    written["manifest"] = out / "manifest.json"
    return written


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
