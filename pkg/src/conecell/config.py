"""Run configurations for the experiment scripts."""

from __future__ import annotations

import argparse
from dataclasses import MISSING, dataclass, field, fields


@dataclass
class SweepConfig:
    """Random fans and upward-closed subsets drawn from consecutive seeds."""

    seeds: int = 200
    start: int = 0
    max_rank: int = 4
    max_cones: int = 40
    subdivisions: int = 2
    cover: str = "all"
    samples: int = 200
    orderings: int = 5


@dataclass
class PeriodicConfig:
    radii: list[int] = field(default_factory=lambda: [2, 3, 4])
    word_bound: int = 8


def add_arguments(parser: argparse.ArgumentParser, cls) -> None:
    for f in fields(cls):
        default = f.default if f.default_factory is MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, list):
            parser.add_argument(flag, type=type(default[0]), nargs="+", default=default)
        else:
            parser.add_argument(flag, type=type(default), default=default)


def from_args(args: argparse.Namespace, cls):
    return cls(**{f.name: getattr(args, f.name) for f in fields(cls)})
