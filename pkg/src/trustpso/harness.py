"""Monte-Carlo runner, per-iteration metrics, scenario configs and CSV output."""

from __future__ import annotations

import json
import logging
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from trustpso.attacks import AttackModel, AttackSpec, select_attackers
from trustpso.detection import DetectorSpec
from trustpso.engine import Engine, GenBestPolicy, SwarmBest, step_conventional, step_trust_aware
from trustpso.rng import make_streams
from trustpso.swarm import Swarm, WorldConfig, init_swarm, true_distance
from trustpso.trust import TrustStrategy

log = logging.getLogger(__name__)

CSV_HEADER = (
    "scenario,engine,attack_model,attack_rate,policy,strategy,"
    "iteration,mean_distance_m,r_md,r_fa"
)
FIGURES = ("fig2", "fig3", "fig4")


class ConfigError(ValueError):
    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


@dataclass(frozen=True)
class Scenario:
    name: str = "scenario"
    world: WorldConfig = field(default_factory=WorldConfig)
    attack: AttackSpec = field(default_factory=AttackSpec)
    detector: DetectorSpec = field(default_factory=DetectorSpec)
    strategy: TrustStrategy = field(default_factory=TrustStrategy)
    policy: GenBestPolicy = GenBestPolicy.BINARY_REJECTION
    engine: Engine = Engine.CONVENTIONAL
    runs: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "policy", GenBestPolicy(self.policy))
        object.__setattr__(self, "engine", Engine(self.engine))
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        self.attack.validate_for(self.world.agent_count)

    def with_(self, **changes) -> "Scenario":
        return replace(self, **changes)


@dataclass(frozen=True)
class IterationMetrics:
    t: int
    mean_honest_distance: float
    r_md: float
    r_fa: float


@dataclass
class MetricsTable:
    """Run-averaged metrics. ``mean`` and ``sem`` have shape ``(T, 3)`` with
    columns (mean honest distance, r_md, r_fa)."""

    mean: np.ndarray
    sem: np.ndarray
    runs: int

    def __len__(self) -> int:
        return len(self.mean)

    @property
    def distance(self) -> np.ndarray:
        return self.mean[:, 0]

    @property
    def r_md(self) -> np.ndarray:
        return self.mean[:, 1]

    @property
    def r_fa(self) -> np.ndarray:
        return self.mean[:, 2]

    def rows(self) -> list[IterationMetrics]:
        return [
            IterationMetrics(t + 1, float(m[0]), float(m[1]), float(m[2]))
            for t, m in enumerate(self.mean)
        ]


def mean_honest_distance(swarm: Swarm, target) -> float:
    honest = ~swarm.is_attacker
    if not honest.any():
        raise ValueError("mean honest distance is undefined when every agent is an attacker")
    return float(np.mean(true_distance(swarm.pos[honest], target)))


def detection_rates(flags, attackers) -> tuple[float, float]:
    """Attacker-detection (r_md, r_fa) of the per-agent labels ``flags``.

    ``attackers`` is a boolean mask over agents. An empty class yields a rate of 0.
    """
    flags = np.asarray(flags, dtype=bool)
    attackers = np.asarray(attackers, dtype=bool)
    if flags.size == 0:
        raise ValueError("empty swarm")
    n_atk = int(attackers.sum())
    n_hon = flags.size - n_atk
    r_md = np.count_nonzero(attackers & ~flags) / n_atk if n_atk else 0.0
    r_fa = np.count_nonzero(~attackers & flags) / n_hon if n_hon else 0.0
    return float(r_md), float(r_fa)


def simulate_run(scenario: Scenario, run_index: int) -> np.ndarray:
    """Simulate one run; returns a ``(T, 3)`` array of per-iteration metrics."""
    world = scenario.world
    streams = make_streams(scenario.master_seed, run_index)
    swarm = init_swarm(world, streams.placement, scenario.strategy.rho_init)
    swarm.is_attacker[select_attackers(world.agent_count, scenario.attack, streams.selection)] = True
    target = world.target_position
    best = SwarmBest()
    out = np.empty((world.horizon_T, 3))
    for t in range(world.horizon_T):
        if scenario.engine is Engine.CONVENTIONAL:
            best = step_conventional(
                swarm, best, world, scenario.attack, streams, scenario.detector, scenario.strategy
            )
        else:
            best = step_trust_aware(
                swarm, best, world, scenario.attack, scenario.detector,
                scenario.strategy, scenario.policy, streams,
            )
        out[t, 0] = mean_honest_distance(swarm, target)
        out[t, 1:] = detection_rates(swarm.flagged, swarm.is_attacker)
    return out


def _simulate_chunk(args):
    from trustpso.batch import simulate_runs

    return simulate_runs(*args)


def run_scenario(scenario: Scenario, jobs: int = 1, chunk_size: int = 250) -> MetricsTable:
    """Average per-iteration metrics over ``scenario.runs`` independent runs.

    Runs are simulated in batches; batches are stacked in run order, so the
    result does not depend on ``jobs`` or ``chunk_size``.
    """
    idx = list(range(scenario.runs))
    chunks = [(scenario, idx[i:i + chunk_size]) for i in range(0, len(idx), chunk_size)]
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_simulate_chunk, chunks))
    else:
        parts = [_simulate_chunk(c) for c in chunks]
    stacked = np.concatenate(parts)
    mean = stacked.mean(axis=0)
    if scenario.runs > 1:
        sem = stacked.std(axis=0, ddof=1) / math.sqrt(scenario.runs)
    else:
        sem = np.full_like(mean, np.nan)
    return MetricsTable(mean, sem, scenario.runs)


# --- config files -----------------------------------------------------------

_WORLD_KEYS = {f.name for f in fields(WorldConfig)} - {"target"}
_ATTACK_KEYS = {
    "attack_model": "model",
    "attack_rate": "rate",
    "theta": "theta",
    "attacker_count_min": "attacker_count_min",
    "attacker_count_max": "attacker_count_max",
}
_DETECTOR_KEYS = {"p_md", "p_fa"}
_STRATEGY_KEYS = {"rho_init", "rho_th", "linear_step"}
_TOP_KEYS = {"name", "engine", "policy", "strategy", "runs", "master_seed", "target_x", "target_y"}
CONFIG_KEYS = frozenset(_WORLD_KEYS | set(_ATTACK_KEYS) | _DETECTOR_KEYS | _STRATEGY_KEYS | _TOP_KEYS)


def scenario_from_dict(cfg: dict) -> Scenario:
    """Build a scenario from a flat key-value mapping; missing keys take defaults."""
    if not isinstance(cfg, dict):
        raise ConfigError("scenario config must be a JSON object")
    unknown = sorted(set(cfg) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown config key {unknown[0]!r}", unknown[0])

    def build(key_hint, fn):
        try:
            return fn()
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value for {key_hint!r}: {exc}", key_hint) from exc

    world_kw = {k: cfg[k] for k in _WORLD_KEYS if k in cfg}
    if "target_x" in cfg or "target_y" in cfg:
        if not ("target_x" in cfg and "target_y" in cfg):
            key = "target_y" if "target_x" in cfg else "target_x"
            raise ConfigError(f"missing config key {key!r}", key)
        world_kw["target"] = (float(cfg["target_x"]), float(cfg["target_y"]))
    world = build(next(iter(sorted(world_kw)), "world"), lambda: WorldConfig(**world_kw))
    attack_kw = {v: cfg[k] for k, v in _ATTACK_KEYS.items() if k in cfg}
    attack = build(next(iter(sorted(k for k in _ATTACK_KEYS if k in cfg)), "attack_model"),
                   lambda: AttackSpec(**attack_kw))
    detector = build("p_md", lambda: DetectorSpec(**{k: cfg[k] for k in _DETECTOR_KEYS if k in cfg}))
    strat_kw = {k: cfg[k] for k in _STRATEGY_KEYS if k in cfg}
    strategy = build("strategy", lambda: TrustStrategy.preset(cfg.get("strategy", "linear-exp"), **strat_kw))
    top = {k: cfg[k] for k in ("name", "runs", "master_seed") if k in cfg}
    for key in ("engine", "policy"):
        if key in cfg:
            enum = Engine if key == "engine" else GenBestPolicy
            top[key] = build(key, lambda: enum(cfg[key]))
    for key in ("runs", "master_seed"):
        if key in top and (not isinstance(top[key], int) or isinstance(top[key], bool)):
            raise ConfigError(f"invalid value for {key!r}: expected an integer", key)
    return build("attacker_count_max", lambda: Scenario(
        world=world, attack=attack, detector=detector, strategy=strategy, **top
    ))


def scenario_to_dict(s: Scenario) -> dict:
    out = {"name": s.name, "engine": s.engine.value, "policy": s.policy.value,
           "strategy": s.strategy.name, "runs": s.runs, "master_seed": s.master_seed}
    for k in sorted(_WORLD_KEYS):
        out[k] = getattr(s.world, k)
    if s.world.target is not None:
        out["target_x"], out["target_y"] = s.world.target
    for k, v in _ATTACK_KEYS.items():
        val = getattr(s.attack, v)
        out[k] = val.value if isinstance(val, AttackModel) else val
    out["p_md"], out["p_fa"] = s.detector.p_md, s.detector.p_fa
    for k in sorted(_STRATEGY_KEYS):
        out[k] = getattr(s.strategy, k)
    return out


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {str(path)!r}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {str(path)!r}: {exc}") from exc
    return scenario_from_dict(data)


# --- CSV output -------------------------------------------------------------

def _g(x: float) -> str:
    return f"{x:.6g}"


def csv_text(scenario: Scenario, table: MetricsTable) -> str:
    conventional = scenario.engine is Engine.CONVENTIONAL
    prefix = ",".join([
        scenario.name,
        scenario.engine.value,
        scenario.attack.model.value,
        _g(scenario.attack.rate),
        "none" if conventional else scenario.policy.value,
        scenario.strategy.name,
    ])
    lines = [CSV_HEADER]
    for row in table.rows():
        lines.append(f"{prefix},{row.t},{_g(row.mean_honest_distance)},{_g(row.r_md)},{_g(row.r_fa)}")
    return "\n".join(lines) + "\n"


def write_csv(scenario: Scenario, table: MetricsTable, out_dir) -> Path:
    path = Path(out_dir) / f"{scenario.name}.csv"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_text(scenario, table))
    return path


# --- figure grids -----------------------------------------------------------

RATES = (0.5, 0.1)
FIG2_MODELS = (
    AttackModel.NONE,
    AttackModel.RANDOM_DISTANCE,
    AttackModel.BIASED_DISTANCE,
    AttackModel.EXTRA_DISTANCE_ERROR,
    AttackModel.ZERO_DISTANCE,
)
FIG3_STRATEGIES = ("binary-binary", "linear-linear", "exp-exp", "exp-linear", "linear-exp")
FIG4_MODELS = (AttackModel.ZERO_DISTANCE, AttackModel.RANDOM_DISTANCE)
FIG4_VARIANTS = ("conventional",) + tuple(p.value for p in GenBestPolicy)


def scenario_seed(master_seed: int, name: str) -> int:
    """Independent per-scenario seed derived from the master seed and scenario name."""
    ss = np.random.SeedSequence([master_seed, zlib.crc32(name.encode())])
    return int(ss.generate_state(1, np.uint64)[0])


def _rate_tag(rate: float) -> str:
    return f"r{round(rate * 100):02d}"


def figure_grid(figure: str, runs: int = 1000, master_seed: int = 0) -> list[tuple[str, Scenario]]:
    """Scenarios for one figure as ``(subfigure, scenario)`` pairs, default parameters throughout."""
    if figure not in FIGURES:
        raise ConfigError(f"unknown figure {figure!r}; expected one of {FIGURES}", "figure")
    base = Scenario(runs=runs)
    grid = []

    def add(sub, name, **kw):
        grid.append((sub, base.with_(name=name, master_seed=scenario_seed(master_seed, name), **kw)))

    for rate in RATES:
        tag = _rate_tag(rate)
        if figure == "fig2":
            for model in FIG2_MODELS:
                add(f"fig2_{tag}", f"fig2_{model.value}_{tag}",
                    attack=AttackSpec(model, rate))
        elif figure == "fig3":
            for strat in FIG3_STRATEGIES:
                add(f"fig3_{tag}", f"fig3_{strat}_{tag}",
                    attack=AttackSpec(AttackModel.ZERO_DISTANCE, rate),
                    strategy=TrustStrategy.preset(strat))
        else:
            for model in FIG4_MODELS:
                for variant in FIG4_VARIANTS:
                    kw = {"engine": Engine.CONVENTIONAL} if variant == "conventional" else {
                        "engine": Engine.TRUST_AWARE, "policy": GenBestPolicy(variant)}
                    add(f"fig4_{model.value}_{tag}", f"fig4_{model.value}_{variant}_{tag}",
                        attack=AttackSpec(model, rate), **kw)
    return grid


def reproduce(
    figure: str,
    out_dir,
    runs: int = 1000,
    master_seed: int = 0,
    jobs: int = 1,
    plot: bool = False,
    progress: Optional[Callable[[str], None]] = None,
) -> list[Path]:
    """Run a figure's scenario grid; write one CSV per scenario (and SVGs if ``plot``)."""
    grid = figure_grid(figure, runs, master_seed)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    results: dict[str, list[tuple[Scenario, MetricsTable]]] = {}
    for sub, scenario in grid:
        if progress:
            progress(f"{scenario.name}: {scenario.runs} runs")
        table = run_scenario(scenario, jobs=jobs)
        written.append(write_csv(scenario, table, out_dir))
        results.setdefault(sub, []).append((scenario, table))
    if plot:
        from trustpso.plotting import plot_figure

        for sub, series in results.items():
            written.extend(plot_figure(figure, sub, series, out_dir))
    return written
