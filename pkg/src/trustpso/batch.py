"""Run-batched simulation used by the Monte-Carlo harness.

Advances many independent runs at once by giving every state array a leading
run axis. Each run keeps its own :class:`~trustpso.rng.Streams` and draws from
them in exactly the order the single-swarm steps in :mod:`trustpso.engine` do,
so a batched run reproduces the corresponding reference run bit for bit.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from trustpso.attacks import AttackModel, apply_injection, draw_attack_variable, select_attackers
from trustpso.engine import Candidates, Engine, GenBestPolicy, SwarmBest, genbest_stochastic, update_velocity
from trustpso.rng import make_streams
from trustpso.swarm import init_swarm, measure_distance, sample_noise
from trustpso.trust import classify_attacker, update_trust


def simulate_runs(scenario, run_indices: Sequence[int]) -> np.ndarray:
    """Metrics for the given runs of ``scenario``; shape ``(len(run_indices), T, 3)``."""
    world, attack, strategy = scenario.world, scenario.attack, scenario.strategy
    detector, policy = scenario.detector, scenario.policy
    trust_aware = scenario.engine is Engine.TRUST_AWARE
    R, n, T = len(run_indices), world.agent_count, world.horizon_T
    streams = [make_streams(scenario.master_seed, r) for r in run_indices]
    sd_noise = math.sqrt(world.noise_power)  # mirrors swarm.sample_noise
    target = world.target_position
    rows = np.arange(R)

    swarms = [init_swarm(world, s.placement, strategy.rho_init) for s in streams]
    pos = np.stack([sw.pos for sw in swarms])
    vel = np.zeros((R, n, 2))
    pbest_d = np.full((R, n), math.inf)
    pbest_p = np.full((R, n, 2), np.nan)
    trust = np.full((R, n), float(strategy.rho_init))
    flagged = np.zeros((R, n), dtype=bool)
    is_attacker = np.zeros((R, n), dtype=bool)
    for r, s in enumerate(streams):
        is_attacker[r, select_attackers(n, attack, s.selection)] = True
    honest = ~is_attacker
    if not honest.any(axis=1).all():
        raise ValueError("mean honest distance is undefined when every agent is an attacker")
    n_atk = is_attacker.sum(axis=1)
    n_hon = n - n_atk

    best_d = np.full(R, math.inf)
    best_p = np.zeros((R, 2))
    has_pos = np.zeros(R, dtype=bool)
    best_src = np.zeros(R, dtype=int)

    out = np.empty((R, T, 3))
    for t in range(T):
        # sensing and injection
        diff = pos - target
        D = np.sqrt(np.sum(diff * diff, axis=-1))
        noise = np.stack([sample_noise(world, s.noise, n) for s in streams])
        d = measure_distance(D, noise)
        if attack.model is AttackModel.NONE:
            attacked = np.zeros((R, n), dtype=bool)
        else:
            alpha = np.empty((R, n), dtype=bool)
            x = np.empty((R, n))
            for r, s in enumerate(streams):
                alpha[r] = s.attack.random(n) < attack.rate
                x[r] = draw_attack_variable(attack.model, attack.theta, s.attack, n)
            attacked = is_attacker & alpha
            d = np.where(attacked, apply_injection(attack.model, d, x), d)

        improved = d < pbest_d
        pbest_d = np.where(improved, d, pbest_d)
        pbest_p = np.where(improved[..., None], pos, pbest_p)

        # detection, trust regression, labelling
        u = np.stack([s.detector.random(n) for s in streams])
        zeta = np.where(attacked, u < 1.0 - detector.p_md, u < detector.p_fa)
        trust = update_trust(strategy, zeta, trust)
        flagged = classify_attacker(trust, strategy.rho_th)

        if not trust_aware:
            cand = np.where(improved, d, math.inf)
            k = np.argmin(cand, axis=1)
            val = cand[rows, k]
            upd = val < best_d
        else:
            best_d = np.where(flagged[rows, best_src], math.inf, best_d)
            tw = ~flagged
            if policy is GenBestPolicy.STOCHASTIC:
                k = best_src.copy()
                val = best_d.copy()
                upd = np.zeros(R, dtype=bool)
                for r, s in enumerate(streams):
                    idx = np.flatnonzero(tw[r])
                    if not len(idx):
                        continue
                    inc = SwarmBest(float(best_d[r]), None, int(best_src[r]))
                    c = Candidates(d[r, idx], pos[r, idx], trust[r, idx], idx)
                    new = genbest_stochastic(c, inc, s.filtering)
                    if new is not inc:
                        upd[r], k[r], val[r] = True, new.source, new.d_best
            else:
                if policy is GenBestPolicy.HYPERBOLIC:
                    if np.any(tw & (trust <= 0)):
                        raise ValueError("hyperbolic scaling needs strictly positive candidate trust")
                    safe = np.where(tw, trust, 1.0)
                    key = np.where(tw, d / safe, math.inf)
                    rho_src = trust[rows, best_src]
                    ok = np.isfinite(best_d) & (rho_src > 0)
                    incumbent = np.where(ok, best_d / np.where(ok, rho_src, 1.0), math.inf)
                else:
                    key = np.where(tw, d, math.inf)
                    incumbent = best_d
                k = np.argmin(key, axis=1)
                upd = key[rows, k] < incumbent
                val = d[rows, k]
        best_d = np.where(upd, val, best_d)
        best_p = np.where(upd[:, None], pos[rows, k], best_p)
        best_src = np.where(upd, k, best_src)
        has_pos |= upd

        # velocity and position
        rr = np.stack([s.pso.random((n, 2)) for s in streams])
        social = np.where(has_pos[:, None, None], best_p[:, None, :], pbest_p)
        vel = update_velocity(vel, pos, pbest_p, social, world.c1, world.c2,
                              rr[..., :1], rr[..., 1:], world.s_max)
        pos = pos + vel

        # metrics
        diff = pos - target
        dist = np.sqrt(np.sum(diff * diff, axis=-1))
        for r in range(R):
            out[r, t, 0] = np.mean(dist[r][honest[r]])
        out[:, t, 1] = np.where(n_atk > 0, np.count_nonzero(is_attacker & ~flagged, axis=1) / np.maximum(n_atk, 1), 0.0)
        out[:, t, 2] = np.where(n_hon > 0, np.count_nonzero(honest & flagged, axis=1) / np.maximum(n_hon, 1), 0.0)
    return out
