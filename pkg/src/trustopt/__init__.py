"""trustopt: island-model evolutionary optimization in which migration is
replaced by trust- or reputation-gated exchange of candidate solutions.

Agents (islands) run an elitist real-coded EA and periodically share their
worst members with a peer; integer credibility values decide how much is
shared, how deeply the received genomes are recombined, and rise or fall
with the outcome.  The package also ships the plain island-model baseline,
six benchmark objectives, a Kruskal-Wallis / Dunn / Holm comparison
pipeline and a CLI harness for batch experiments.
"""

from .benchmarks import (
    OBJECTIVE_NAMES,
    ObjectiveSpec,
    expanded_schaffer,
    get_objective,
    griewank,
    lennard_jones,
    rastrigin,
    schwefel_noisy,
    sphere,
)
from .config import (
    ALGORITHMS,
    AgentTemplate,
    ConfigError,
    CredibilityConfig,
    TboConfig,
    config_from_dict,
    config_to_dict,
    dump_config,
    load_config,
    validate_config,
)
from .ea import (
    EaOperatorConfig,
    ea_step,
    polynomial_mutation,
    replace_mu_plus_lambda,
    sbx_crossover,
    tournament_select,
)
from .engine import RunState, advance_step, island_model_run, run_repetitions, step_dispatch, tbo_run
from .harness import (
    BASELINE_ALGORITHM,
    ExperimentManifest,
    ProblemCell,
    load_manifest,
    run_manifest,
    write_plots,
    write_stats_reports,
)
from .presets import DISPLAY_NAMES, PRESET_NAMES, load_preset, preset_json
from .rng import agent_stream, derive_run_seed
from .socio import (
    InteractionOutcome,
    ReputationDelta,
    SharedPopulation,
    TrustDelta,
    acceptance_threshold,
    divergence_ranking,
    interaction_step,
    phi,
    sc_crossover,
    sc_variation,
    select_shared,
    update_reputation,
    update_trust,
)
from .stats import (
    PairwiseComparison,
    SampleGroup,
    TestReport,
    compare_groups,
    dunn_holm,
    holm_adjust,
    kruskal_wallis,
    summarize,
)
from .types import (
    AgentState,
    ConvergenceTrace,
    CredibilityState,
    GlobalBest,
    Population,
    ScCrossoverConfig,
    effective_rates,
    evaluate_population,
    init_population,
    mean_fitness,
)

__version__ = "0.1.0"
