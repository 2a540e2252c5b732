"""Abstract data-anomaly detector with fixed misdetection and false-alarm rates.

The detector sees ground truth (whether the report was injected) and only
decides stochastically; the reported distance value never enters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DetectorSpec:
    p_md: float = 0.5
    p_fa: float = 0.05

    def __post_init__(self):
        for name in ("p_md", "p_fa"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must be in [0, 1], got {v}")


def classify(attacked_now, spec: DetectorSpec, rng: np.random.Generator):
    """Anomaly flag per report. Vectorizes over a boolean array of ``attacked_now``."""
    attacked_now = np.asarray(attacked_now, dtype=bool)
    u = rng.random(attacked_now.shape or None)
    out = np.where(attacked_now, u < 1.0 - spec.p_md, u < spec.p_fa)
    return out if out.ndim else bool(out)
