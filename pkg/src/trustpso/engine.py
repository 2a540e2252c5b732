"""PSO iteration dynamics: the conventional loop, the trust-aware loop, and the
swarm-best update policies used by the latter.

Both steps mutate the :class:`Swarm` in place and return the new
:class:`SwarmBest`. Scans that the listings describe as sequential loops with a
strict ``<`` are evaluated as a first-occurrence ``argmin``, which picks the
same winner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from trustpso.attacks import AttackModel, AttackSpec, apply_injection, draw_attack_variable, should_attack
from trustpso.detection import DetectorSpec, classify
from trustpso.rng import Streams
from trustpso.swarm import Swarm, WorldConfig, measure_distance, sample_noise, true_distance
from trustpso.trust import TrustStrategy, classify_attacker, update_trust


class Engine(str, Enum):
    CONVENTIONAL = "conventional"
    TRUST_AWARE = "trust-aware"


class GenBestPolicy(str, Enum):
    BINARY_REJECTION = "binary-rejection"
    HYPERBOLIC = "hyperbolic"
    STOCHASTIC = "stochastic"


@dataclass(frozen=True)
class SwarmBest:
    d_best: float = math.inf
    p_best: Optional[np.ndarray] = None
    source: int = 0

    @property
    def is_set(self) -> bool:
        return math.isfinite(self.d_best)

    def invalidated(self) -> "SwarmBest":
        # position is kept so velocity updates still have a social attractor
        return SwarmBest(math.inf, self.p_best, self.source)


class Candidates(NamedTuple):
    """Current-iteration reports of trustworthy agents, in ascending id order."""

    d: np.ndarray
    p: np.ndarray
    rho: np.ndarray
    ids: np.ndarray

    @classmethod
    def from_records(cls, records: Sequence[tuple]) -> "Candidates":
        """Build from ``(d, p, rho, id)`` tuples."""
        if not records:
            return cls(np.empty(0), np.empty((0, 2)), np.empty(0), np.empty(0, dtype=int))
        d, p, rho, ids = zip(*records)
        return cls(
            np.asarray(d, dtype=float),
            np.asarray(p, dtype=float).reshape(-1, 2),
            np.asarray(rho, dtype=float),
            np.asarray(ids, dtype=int),
        )

    def __len__(self) -> int:  # type: ignore[override]
        return len(self.d)


def _take(c: Candidates, k: int) -> SwarmBest:
    return SwarmBest(float(c.d[k]), np.array(c.p[k], dtype=float), int(c.ids[k]))


def genbest_binary(c: Candidates, best: SwarmBest) -> SwarmBest:
    if len(c) == 0:
        return best
    k = int(np.argmin(c.d))
    return _take(c, k) if c.d[k] < best.d_best else best


def genbest_hyperbolic(c: Candidates, best: SwarmBest, rho_of_source: float) -> SwarmBest:
    """Compare trust-scaled distances ``d / rho``; an unset record scales to +inf."""
    if len(c) == 0:
        return best
    if np.any(c.rho <= 0):
        raise ValueError("hyperbolic scaling needs strictly positive candidate trust")
    scaled = c.d / c.rho
    if best.is_set and rho_of_source > 0:
        incumbent = best.d_best / rho_of_source
    else:
        incumbent = math.inf
    k = int(np.argmin(scaled))
    return _take(c, k) if scaled[k] < incumbent else best


def filtering_pmf(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    total = rho.sum()
    if not total > 0:
        raise ValueError("stochastic filtering needs a positive total trust")
    return rho / total


def stochastic_filter(rho: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Positions (into ``rho``) of ``len(rho)`` i.i.d. draws with probability proportional to trust."""
    return rng.choice(len(rho), size=len(rho), replace=True, p=filtering_pmf(rho))


def genbest_stochastic(c: Candidates, best: SwarmBest, rng: np.random.Generator) -> SwarmBest:
    """Resample candidates with replacement, proportionally to trust, then scan raw distances."""
    if len(c) == 0:
        return best
    drawn = stochastic_filter(c.rho, rng)
    j = int(np.argmin(c.d[drawn]))
    k = int(drawn[j])
    return _take(c, k) if c.d[k] < best.d_best else best


def genbest(
    policy: GenBestPolicy,
    c: Candidates,
    best: SwarmBest,
    rho_of_source: float,
    rng: np.random.Generator,
) -> SwarmBest:
    policy = GenBestPolicy(policy)
    if policy is GenBestPolicy.BINARY_REJECTION:
        return genbest_binary(c, best)
    if policy is GenBestPolicy.HYPERBOLIC:
        return genbest_hyperbolic(c, best, rho_of_source)
    return genbest_stochastic(c, best, rng)


def update_velocity(v, p, pbest_i, pbest_I, c1, c2, r1, r2, s_max):
    """PSO velocity update followed by the speed clamp.

    Works on one agent (shape ``(2,)``) or many (shape ``(n, 2)`` with ``r1``,
    ``r2`` of shape ``(n, 1)``).
    """
    v = np.asarray(v, dtype=float)
    p = np.asarray(p, dtype=float)
    new = v + c1 * r1 * (np.asarray(pbest_i) - p) + c2 * r2 * (np.asarray(pbest_I) - p)
    norm = np.sqrt(np.sum(new * new, axis=-1, keepdims=True))
    over = norm > s_max
    return np.where(over, new * (s_max / np.where(over, norm, 1.0)), new)


def sense(swarm: Swarm, world: WorldConfig, attack: AttackSpec, streams: Streams):
    """Measure every agent's distance and apply injections.

    Returns ``(d, attacked)``. Draw counts per stream are fixed per iteration,
    so the sensing noise sequence does not depend on the attack configuration.
    """
    n = len(swarm)
    D = true_distance(swarm.pos, world.target_position)
    d = measure_distance(D, sample_noise(world, streams.noise, n))
    if attack.model is AttackModel.NONE:
        return d, np.zeros(n, dtype=bool)
    alpha = should_attack(attack.rate, streams.attack, n)
    x = draw_attack_variable(attack.model, attack.theta, streams.attack, n)
    attacked = swarm.is_attacker & alpha
    return np.where(attacked, apply_injection(attack.model, d, x), d), attacked


def regress_trust(
    swarm: Swarm,
    attacked: np.ndarray,
    detector: DetectorSpec,
    strategy: TrustStrategy,
    streams: Streams,
) -> np.ndarray:
    """Anomaly detection, then trust update, then threshold labelling; returns the anomaly flags."""
    zeta = classify(attacked, detector, streams.detector)
    swarm.trust = update_trust(strategy, zeta, swarm.trust)
    swarm.flagged = classify_attacker(swarm.trust, strategy.rho_th)
    return zeta


def _update_personal_best(swarm: Swarm, d: np.ndarray) -> np.ndarray:
    improved = d < swarm.pbest_d
    swarm.pbest_d = np.where(improved, d, swarm.pbest_d)
    swarm.pbest_p = np.where(improved[:, None], swarm.pos, swarm.pbest_p)
    return improved


def _move(swarm: Swarm, best: SwarmBest, world: WorldConfig, streams: Streams) -> None:
    r = streams.pso.random((len(swarm), 2))
    social = best.p_best if best.p_best is not None else swarm.pbest_p
    swarm.vel = update_velocity(
        swarm.vel, swarm.pos, swarm.pbest_p, social,
        world.c1, world.c2, r[:, :1], r[:, 1:], world.s_max,
    )
    swarm.pos = swarm.pos + swarm.vel


def step_conventional(
    swarm: Swarm,
    best: SwarmBest,
    world: WorldConfig,
    attack: AttackSpec,
    streams: Streams,
    detector: Optional[DetectorSpec] = None,
    strategy: Optional[TrustStrategy] = None,
) -> SwarmBest:
    """One iteration of blind-trust PSO.

    If ``detector`` and ``strategy`` are given, trust scores and attacker labels
    are tracked passively; they never feed back into the dynamics.
    """
    d, attacked = sense(swarm, world, attack, streams)
    improved = _update_personal_best(swarm, d)
    if detector is not None and strategy is not None:
        regress_trust(swarm, attacked, detector, strategy, streams)
    cand = np.where(improved, d, math.inf)
    k = int(np.argmin(cand))
    if cand[k] < best.d_best:
        best = SwarmBest(float(cand[k]), swarm.pos[k].copy(), k)
    _move(swarm, best, world, streams)
    return best


def step_trust_aware(
    swarm: Swarm,
    best: SwarmBest,
    world: WorldConfig,
    attack: AttackSpec,
    detector: DetectorSpec,
    strategy: TrustStrategy,
    policy: GenBestPolicy,
    streams: Streams,
) -> SwarmBest:
    d, attacked = sense(swarm, world, attack, streams)
    _update_personal_best(swarm, d)
    regress_trust(swarm, attacked, detector, strategy, streams)
    if swarm.flagged[best.source]:
        best = best.invalidated()
    tw = np.flatnonzero(~swarm.flagged)
    if len(tw):
        cands = Candidates(d[tw], swarm.pos[tw], swarm.trust[tw], tw)
        best = genbest(policy, cands, best, float(swarm.trust[best.source]), streams.filtering)
    _move(swarm, best, world, streams)
    return best
