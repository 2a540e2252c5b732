"""Simulation-free expectations for the per-agent trust chain.

An honest agent is flagged by the detector with probability ``p_fa`` each
iteration, independently of everything else, so its false-alarm probability at
iteration t is an exact sum over the 2**t detector outcomes. For attackers the
per-iteration flag probability is ``rate * (1 - p_md)``; the horizon is too long
to enumerate, so the trust chain alone (no swarm) is sampled instead.

    python3 scripts/trust_chain_oracle.py
"""

import itertools

import numpy as np

from trustpso.trust import STRATEGY_PRESETS, TrustStrategy, update_trust

P_MD, P_FA, T = 0.5, 0.05, 50


def exact_honest_false_alarm(strategy: TrustStrategy, t: int, p_fa: float = P_FA) -> float:
    total = 0.0
    for path in itertools.product((False, True), repeat=t):
        rho = np.array([strategy.rho_init])
        for z in path:
            rho = update_trust(strategy, np.array([z]), rho)
        if rho[0] < strategy.rho_th:
            k = sum(path)
            total += p_fa**k * (1 - p_fa) ** (t - k)
    return total


def sampled_missed_detection(strategy: TrustStrategy, rate: float, samples: int = 400_000,
                             seed: int = 1) -> float:
    rng = np.random.default_rng(seed)
    p_flag = rate * (1 - P_MD) + (1 - rate) * P_FA
    rho = np.full(samples, strategy.rho_init)
    for _ in range(T):
        rho = update_trust(strategy, rng.random(samples) < p_flag, rho)
    return float(np.mean(rho >= strategy.rho_th))


def main():
    print(f"{'strategy':<14} {'r_fa(10) exact':>15} {'r_md(50) @50%':>14} {'r_md(50) @10%':>14}")
    for name in STRATEGY_PRESETS:
        s = TrustStrategy.preset(name)
        print(f"{name:<14} {exact_honest_false_alarm(s, 10):>15.4f} "
              f"{sampled_missed_detection(s, 0.5):>14.4f} {sampled_missed_detection(s, 0.1):>14.4f}")


if __name__ == "__main__":
    main()
