"""Trust-aware particle swarm optimization under insider data-injection attacks."""

from trustpso.attacks import AttackModel, AttackSpec, inject, select_attackers, should_attack
from trustpso.detection import DetectorSpec, classify
from trustpso.engine import (
    Candidates,
    Engine,
    GenBestPolicy,
    SwarmBest,
    genbest,
    genbest_binary,
    genbest_hyperbolic,
    genbest_stochastic,
    step_conventional,
    step_trust_aware,
    update_velocity,
)
from trustpso.harness import (
    IterationMetrics,
    MetricsTable,
    Scenario,
    detection_rates,
    mean_honest_distance,
    reproduce,
    run_scenario,
)
from trustpso.rng import Streams, make_streams
from trustpso.swarm import (
    AgentState,
    PersonalBest,
    Swarm,
    WorldConfig,
    init_swarm,
    measure_distance,
    true_distance,
)
from trustpso.trust import (
    STRATEGY_PRESETS,
    TrustStrategy,
    UpdateMode,
    classify_attacker,
    penalize,
    reward,
    update_trust,
)

__version__ = "0.1.0"
