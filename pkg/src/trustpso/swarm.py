"""World configuration, swarm state, and the noisy distance sensor.

Swarm state is stored as parallel numpy arrays (one row per agent) so that an
iteration touches every agent with a handful of vector operations. A single
agent's record can be pulled out as an :class:`AgentState` for inspection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

Position = np.ndarray  # shape (2,), meters
Velocity = np.ndarray  # shape (2,), meters/round


@dataclass(frozen=True)
class WorldConfig:
    """Geometry, sensing, and PSO constants. Defaults are the reference setup."""

    region_width: float = 60.0
    region_height: float = 60.0
    noise_power: float = 0.1  # variance of the dB-domain noise
    s_max: float = 5.0
    c1: float = 0.5
    c2: float = 0.5
    horizon_T: int = 50
    agent_count: int = 100
    target: Optional[tuple[float, float]] = None  # None -> region center

    def __post_init__(self):
        if not (self.region_width > 0 and self.region_height > 0):
            raise ValueError("region dimensions must be positive")
        if not self.noise_power >= 0:
            raise ValueError("noise_power must be >= 0")
        if not self.s_max > 0:
            raise ValueError("s_max must be > 0")
        if self.agent_count < 1:
            raise ValueError("agent_count must be >= 1")
        if self.horizon_T < 1:
            raise ValueError("horizon_T must be >= 1")
        if self.target is not None:
            tx, ty = self.target
            if not (math.isfinite(tx) and math.isfinite(ty)):
                raise ValueError("target must be finite")

    @property
    def target_position(self) -> Position:
        if self.target is None:
            return np.array([self.region_width / 2, self.region_height / 2])
        return np.asarray(self.target, dtype=float)


@dataclass
class PersonalBest:
    d_best: float = math.inf
    p_best: Optional[Position] = None


@dataclass
class AgentState:
    id: int
    position: Position
    velocity: Velocity
    personal_best: PersonalBest
    trust: float
    is_attacker: bool
    flagged: bool = False


@dataclass
class Swarm:
    """Struct-of-arrays swarm state; row ``i`` belongs to agent ``i``."""

    pos: np.ndarray
    vel: np.ndarray
    pbest_d: np.ndarray
    pbest_p: np.ndarray  # NaN rows until the first personal-best update
    trust: np.ndarray
    is_attacker: np.ndarray
    flagged: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.flagged is None:
            self.flagged = np.zeros(len(self.pos), dtype=bool)

    def __len__(self) -> int:
        return len(self.pos)

    def agent(self, i: int) -> AgentState:
        has_best = math.isfinite(self.pbest_d[i])
        return AgentState(
            id=i,
            position=self.pos[i].copy(),
            velocity=self.vel[i].copy(),
            personal_best=PersonalBest(
                float(self.pbest_d[i]), self.pbest_p[i].copy() if has_best else None
            ),
            trust=float(self.trust[i]),
            is_attacker=bool(self.is_attacker[i]),
            flagged=bool(self.flagged[i]),
        )

    def agents(self) -> list[AgentState]:
        return [self.agent(i) for i in range(len(self))]

    def copy(self) -> "Swarm":
        return Swarm(
            self.pos.copy(),
            self.vel.copy(),
            self.pbest_d.copy(),
            self.pbest_p.copy(),
            self.trust.copy(),
            self.is_attacker.copy(),
            self.flagged.copy(),
        )


def true_distance(p, target):
    """Euclidean distance; ``p`` may be a single position or an ``(n, 2)`` array."""
    diff = np.asarray(p, dtype=float) - np.asarray(target, dtype=float)
    return np.sqrt(np.sum(diff * diff, axis=-1))


def measure_distance(D, n):
    """Apply log-normal sensing error: ``D * 10**(n/10)`` with ``n`` in dB."""
    D = np.asarray(D, dtype=float)
    if np.any(D < 0):
        raise ValueError("true distance must be non-negative")
    out = D * np.power(10.0, np.asarray(n, dtype=float) / 10.0)
    return out if out.ndim else float(out)


def sample_noise(cfg: WorldConfig, rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.normal(0.0, math.sqrt(cfg.noise_power), size)


def init_swarm(cfg: WorldConfig, rng: np.random.Generator, rho_init: float = 0.5) -> Swarm:
    n = cfg.agent_count
    pos = rng.uniform((0.0, 0.0), (cfg.region_width, cfg.region_height), size=(n, 2))
    return Swarm(
        pos=pos,
        vel=np.zeros((n, 2)),
        pbest_d=np.full(n, math.inf),
        pbest_p=np.full((n, 2), np.nan),
        trust=np.full(n, float(rho_init)),
        is_attacker=np.zeros(n, dtype=bool),
    )
