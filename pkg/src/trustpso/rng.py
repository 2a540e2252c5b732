"""Per-run, per-concern random substreams.

Every run derives its seed from ``(master_seed, run_index)`` through numpy's
``SeedSequence`` hash, then spawns one child per concern. Turning a concern on
or off (attacks, stochastic filtering, ...) never shifts another concern's draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CONCERNS = ("placement", "selection", "noise", "attack", "detector", "pso", "filtering")


@dataclass(frozen=True)
class Streams:
    placement: np.random.Generator
    selection: np.random.Generator
    noise: np.random.Generator
    attack: np.random.Generator
    detector: np.random.Generator
    pso: np.random.Generator
    filtering: np.random.Generator


def run_seed(master_seed: int, run_index: int) -> np.random.SeedSequence:
    if master_seed < 0 or run_index < 0:
        raise ValueError("seeds and run indices must be non-negative")
    return np.random.SeedSequence([master_seed & 0xFFFFFFFFFFFFFFFF, run_index])


def make_streams(master_seed: int, run_index: int = 0) -> Streams:
    children = run_seed(master_seed, run_index).spawn(len(CONCERNS))
    return Streams(**{name: np.random.default_rng(ss) for name, ss in zip(CONCERNS, children)})
