"""Insider data-injection attacks on distance reports."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class AttackModel(str, Enum):
    NONE = "none"
    RANDOM_DISTANCE = "random-distance"
    BIASED_DISTANCE = "biased-distance"
    EXTRA_DISTANCE_ERROR = "extra-distance-error"
    ZERO_DISTANCE = "zero-distance"


@dataclass(frozen=True)
class AttackSpec:
    model: AttackModel = AttackModel.NONE
    rate: float = 0.5
    theta: float = 1.0
    attacker_count_min: int = 3
    attacker_count_max: int = 10

    def __post_init__(self):
        object.__setattr__(self, "model", AttackModel(self.model))
        if not 0 < self.rate <= 1:
            raise ValueError(f"attack rate must be in (0, 1], got {self.rate}")
        if not self.theta > 0:
            raise ValueError(f"theta must be > 0, got {self.theta}")
        if not 0 <= self.attacker_count_min <= self.attacker_count_max:
            raise ValueError("need 0 <= attacker_count_min <= attacker_count_max")

    def validate_for(self, agent_count: int) -> None:
        if self.model is not AttackModel.NONE and self.attacker_count_max > agent_count:
            raise ValueError(
                f"attacker_count_max={self.attacker_count_max} exceeds agent_count={agent_count}"
            )


def select_attackers(agent_count: int, spec: AttackSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw the run's attacker set: size uniform on [min, max], members without replacement.

    Returns a sorted array of agent indices. With attack model ``none`` the set is empty.
    """
    spec.validate_for(agent_count)
    if spec.model is AttackModel.NONE:
        return np.empty(0, dtype=int)
    k = int(rng.integers(spec.attacker_count_min, spec.attacker_count_max + 1))
    return np.sort(rng.choice(agent_count, size=k, replace=False))


def should_attack(rate: float, rng: np.random.Generator, size=None):
    if not 0 < rate <= 1:
        raise ValueError(f"attack rate must be in (0, 1], got {rate}")
    return rng.random(size) < rate


def draw_attack_variable(model: AttackModel, theta: float, rng: np.random.Generator, size=None):
    """The model's internal random variable (the injected value for random-distance)."""
    model = AttackModel(model)
    if model is AttackModel.RANDOM_DISTANCE:
        return rng.uniform(0.0, 1.0 / theta, size)
    if model is AttackModel.BIASED_DISTANCE:
        return rng.uniform(-10.0 * theta, 0.0, size)
    if model is AttackModel.EXTRA_DISTANCE_ERROR:
        # theta is a variance, mirroring the sensing-noise convention
        return rng.normal(0.0, math.sqrt(theta), size)
    if model is AttackModel.ZERO_DISTANCE:
        return np.zeros(size) if size is not None else 0.0
    raise ValueError("attack model 'none' never injects")


def apply_injection(model: AttackModel, d_raw, x):
    """Replace raw distance(s) ``d_raw`` given the model's drawn variable ``x``."""
    model = AttackModel(model)
    d_raw = np.asarray(d_raw, dtype=float)
    if np.any(d_raw < 0):
        raise ValueError("raw distance must be non-negative")
    x = np.asarray(x, dtype=float)
    if model is AttackModel.RANDOM_DISTANCE:
        out = np.broadcast_to(x, np.broadcast(d_raw, x).shape).astype(float)
    elif model is AttackModel.BIASED_DISTANCE:
        out = np.maximum(0.0, d_raw + x)
    elif model is AttackModel.EXTRA_DISTANCE_ERROR:
        out = d_raw / np.power(10.0, x / 10.0)
    elif model is AttackModel.ZERO_DISTANCE:
        out = np.zeros(np.broadcast(d_raw, x).shape)
    else:
        raise ValueError("attack model 'none' never injects")
    return out if out.ndim else float(out)


def inject(model: AttackModel, theta: float, d_raw, rng: np.random.Generator):
    if not theta > 0:
        raise ValueError(f"theta must be > 0, got {theta}")
    size = np.shape(d_raw) or None
    return apply_injection(model, d_raw, draw_attack_variable(model, theta, rng, size))
