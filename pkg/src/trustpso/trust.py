"""Trust-score regression and threshold-based attacker labelling."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

LINEAR_STEP = 0.05


class UpdateMode(str, Enum):
    BINARY = "binary"
    LINEAR = "linear"
    EXPONENTIAL = "exp"


def _check(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any((rho < 0) | (rho > 1)) or np.any(np.isnan(rho)):
        raise ValueError("trust score must lie in [0, 1]")
    return rho


def _scalar(out):
    return out if out.ndim else float(out)


def reward(mode: UpdateMode, rho, step: float = LINEAR_STEP):
    """Trust after a report classified as normal."""
    rho = _check(rho)
    mode = UpdateMode(mode)
    if mode is UpdateMode.BINARY:
        out = np.ones_like(rho)
    elif mode is UpdateMode.LINEAR:
        out = np.minimum(rho + step, 1.0)
    else:
        out = np.minimum(2.0 * rho, 1.0)
    return _scalar(out)


def penalize(mode: UpdateMode, rho, step: float = LINEAR_STEP):
    """Trust after a report classified as anomalous."""
    rho = _check(rho)
    mode = UpdateMode(mode)
    if mode is UpdateMode.BINARY:
        out = np.zeros_like(rho)
    elif mode is UpdateMode.LINEAR:
        out = np.maximum(rho - step, 0.0)
    else:
        out = rho / 2.0
    return _scalar(out)


@dataclass(frozen=True)
class TrustStrategy:
    reward_mode: UpdateMode = UpdateMode.LINEAR
    penalty_mode: UpdateMode = UpdateMode.EXPONENTIAL
    rho_init: float = 0.5
    rho_th: float = 0.382
    linear_step: float = LINEAR_STEP

    def __post_init__(self):
        object.__setattr__(self, "reward_mode", UpdateMode(self.reward_mode))
        object.__setattr__(self, "penalty_mode", UpdateMode(self.penalty_mode))
        for name in ("rho_init", "rho_th"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if not self.linear_step > 0:
            raise ValueError("linear_step must be > 0")

    @property
    def name(self) -> str:
        return f"{self.reward_mode.value}-{self.penalty_mode.value}"

    @classmethod
    def preset(cls, name: str, **overrides) -> "TrustStrategy":
        """Build from ``"<reward>-<penalty>"``, e.g. ``"linear-exp"``.

        The five named presets are listed in ``STRATEGY_PRESETS``; any other
        pairing of ``binary``/``linear``/``exp`` is accepted as well.
        """
        if name in STRATEGY_PRESETS:
            reward_mode, penalty_mode = STRATEGY_PRESETS[name]
        else:
            parts = name.split("-")
            try:
                reward_mode, penalty_mode = (UpdateMode(m) for m in parts)
            except ValueError:
                raise ValueError(
                    f"unknown strategy {name!r}; expected one of {sorted(STRATEGY_PRESETS)}"
                ) from None
        return cls(reward_mode, penalty_mode, **overrides)


STRATEGY_PRESETS = {
    "binary-binary": (UpdateMode.BINARY, UpdateMode.BINARY),
    "linear-linear": (UpdateMode.LINEAR, UpdateMode.LINEAR),
    "exp-exp": (UpdateMode.EXPONENTIAL, UpdateMode.EXPONENTIAL),
    "exp-linear": (UpdateMode.EXPONENTIAL, UpdateMode.LINEAR),
    "linear-exp": (UpdateMode.LINEAR, UpdateMode.EXPONENTIAL),
}


def update_trust(strategy: TrustStrategy, zeta, rho):
    """Reward or penalize depending on the anomaly flag ``zeta`` (vectorizes)."""
    zeta = np.asarray(zeta, dtype=bool)
    up = reward(strategy.reward_mode, rho, strategy.linear_step)
    down = penalize(strategy.penalty_mode, rho, strategy.linear_step)
    return _scalar(np.where(zeta, down, up))


def classify_attacker(rho, rho_th: float):
    """Label as attacker when trust is strictly below the threshold."""
    out = np.asarray(rho) < rho_th
    return out if out.ndim else bool(out)
