"""Core state containers, rate amplification, config validation, streams."""

import numpy as np
import pytest
from helpers import linear_objective, population_with_values

from trustopt import (
    AgentTemplate,
    ConfigError,
    CredibilityConfig,
    CredibilityState,
    Population,
    ScCrossoverConfig,
    TboConfig,
    agent_stream,
    config_from_dict,
    config_to_dict,
    derive_run_seed,
    dump_config,
    effective_rates,
    evaluate_population,
    get_objective,
    init_population,
    load_config,
    load_preset,
    mean_fitness,
    validate_config,
)


# --- effective rates --------------------------------------------------------


def test_effective_rates_index_zero_keeps_base():
    assert effective_rates(0.005, 0.0005, 0, 1.3) == (0.005, 0.0005)


def test_effective_rates_amplification():
    pc, pm = effective_rates(0.005, 0.0005, 2, 1.3)
    assert pc == pytest.approx(0.018, rel=1e-12)
    assert pm == pytest.approx(0.0018, rel=1e-12)


def test_effective_rates_clamp_to_one():
    assert effective_rates(0.5, 0.5, 19, 2.0) == (1.0, 1.0)


def test_effective_rates_reject_negative_arguments():
    with pytest.raises(ValueError):
        effective_rates(0.1, 0.1, -1, 1.0)
    with pytest.raises(ValueError):
        effective_rates(0.1, 0.1, 0, -0.5)


# --- population -------------------------------------------------------------


def test_population_shape_checks():
    with pytest.raises(ValueError):
        Population(np.zeros(3), np.zeros(3))  # genes not 2-D
    with pytest.raises(ValueError):
        Population(np.zeros((3, 2)), np.zeros(2))  # fitness length mismatch


def test_population_copy_is_independent():
    pop = Population.from_genes(np.ones((2, 3)))
    other = pop.copy()
    other.genes[0, 0] = 7.0
    other.fitness[0] = 1.0
    assert pop.genes[0, 0] == 1.0
    assert np.isnan(pop.fitness[0])


def test_init_population_degenerate_interval():
    spec = linear_objective(2, bound=0.0)
    pop = init_population(5, spec, np.random.default_rng(0))
    assert pop.genes.shape == (5, 2)
    assert np.all(pop.genes == 0.0)
    assert np.all(np.isnan(pop.fitness))


def test_init_population_in_bounds_and_deterministic():
    spec = get_objective("sphere", 50)
    a = init_population(3, spec, np.random.default_rng(11))
    b = init_population(3, spec, np.random.default_rng(11))
    assert np.all(a.genes >= -100.0)
    assert np.all(a.genes <= 100.0)
    assert np.array_equal(a.genes, b.genes)


def test_init_population_rejects_zero_size():
    with pytest.raises(ValueError):
        init_population(0, linear_objective(), np.random.default_rng(0))


def test_mean_fitness_values():
    spec = linear_objective()
    assert mean_fitness(population_with_values([4.0]), spec) == 4.0
    assert mean_fitness(population_with_values([2.0, 6.0]), spec) == 4.0


def test_mean_fitness_matches_oracle(rng):
    spec = get_objective("sphere", 5)
    pop = init_population(5, spec, rng)
    expected = sum(float(spec.evaluate(g)) for g in pop.genes) / 5.0
    assert mean_fitness(pop, spec) == pytest.approx(expected, rel=1e-12)


def test_evaluate_population_fills_only_missing():
    spec = linear_objective()
    pop = population_with_values([3.0, 8.0])
    evaluate_population(pop, spec)
    # poison the cache; a second call must not touch filled entries
    pop.fitness[0] = -1.0
    assert np.array_equal(evaluate_population(pop, spec), [-1.0, 8.0])
    pop.fitness[1] = np.nan
    assert np.array_equal(evaluate_population(pop, spec), [-1.0, 8.0])


# --- credibility state ------------------------------------------------------


def test_credibility_initial_values():
    t = CredibilityState.initial("trust", 4, 25, 1, 50)
    assert t.trust.shape == (4, 4)
    assert np.all(t.trust == 25)
    r = CredibilityState.initial("reputation", 3, 40, 1, 50)
    assert np.array_equal(r.reputation, [40, 40, 40])


def test_credibility_role_mapping_trust():
    state = CredibilityState.initial("trust", 3, 10, 1, 50)
    state.trust[1, 2] = 33  # sender 1's trust in recipient 2
    state.trust[2, 1] = 7   # recipient 2's trust in sender 1
    assert state.credibility_in(1, 2) == 33
    assert state.credibility_out(1, 2) == 7


def test_credibility_role_mapping_reputation():
    state = CredibilityState.initial("reputation", 3, 10, 1, 50)
    state.reputation[1] = 44  # sender's public score
    state.reputation[2] = 5   # recipient's public score
    assert state.credibility_in(1, 2) == 5
    assert state.credibility_out(1, 2) == 44


def test_credibility_state_validation():
    with pytest.raises(ValueError):
        CredibilityState.initial("trust", 3, 0, 1, 50)  # start below min
    with pytest.raises(ValueError):
        CredibilityState("trust", 1, 50)  # missing matrix
    with pytest.raises(ValueError):
        CredibilityState.initial("karma", 3, 10, 1, 50)


def test_sc_crossover_config_validation():
    with pytest.raises(ValueError):
        ScCrossoverConfig("mild", "swap")
    with pytest.raises(ValueError):
        ScCrossoverConfig("weak", "merge")


# --- config validation ------------------------------------------------------


def _valid_cfg(**kw):
    base = dict(agent_count=4, dimension=10, objective="sphere", epoch_length=25,
                diversity_factor=1.3, max_steps=100, seed=1)
    base.update(kw)
    return TboConfig(**base)


def test_validate_accepts_shipped_preset():
    cfg = load_preset("small_society")
    validate_config(cfg)  # must not raise
    assert cfg.agent_count == 5
    assert cfg.credibility.kind == "trust"
    assert cfg.credibility.start_value == 5


def test_validate_rejects_single_agent():
    with pytest.raises(ConfigError, match="agent_count must be >= 2"):
        validate_config(_valid_cfg(agent_count=1))


def test_validate_rejects_start_below_min():
    cred = CredibilityConfig(kind="trust", start_value=0, min_value=1, max_value=50)
    with pytest.raises(ConfigError, match="start below min"):
        validate_config(_valid_cfg(credibility=cred))


def test_validate_collects_every_violation():
    cfg = _valid_cfg(agent_count=0, dimension=0, epoch_length=0, max_steps=0)
    with pytest.raises(ConfigError) as err:
        validate_config(cfg)
    assert len(err.value.violations) >= 4


def test_validate_rejects_unknown_objective():
    with pytest.raises(ConfigError, match="warp_field"):
        validate_config(_valid_cfg(objective="warp_field"))


def test_validate_tbo_needs_credibility():
    with pytest.raises(ConfigError, match="credibility"):
        validate_config(_valid_cfg(credibility=None))
    # the baseline does not
    validate_config(_valid_cfg(algorithm="island_model", credibility=None))


def test_validate_per_agent_count_and_fields():
    two = (AgentTemplate(), AgentTemplate())
    with pytest.raises(ConfigError, match="per_agent"):
        validate_config(_valid_cfg(per_agent=two))  # 2 templates for 4 agents
    bad = (AgentTemplate(base_crossover_rate=1.5),)
    with pytest.raises(ConfigError, match="base_crossover_rate"):
        validate_config(_valid_cfg(per_agent=bad))


def test_validate_rejects_heterogeneous_epochs():
    tpl = (AgentTemplate(epoch_length=10),)
    with pytest.raises(ConfigError, match="epoch_length"):
        validate_config(_valid_cfg(per_agent=tpl, epoch_length=25))
    # matching value passes
    validate_config(_valid_cfg(per_agent=(AgentTemplate(epoch_length=25),)))


def test_agent_template_accessor_broadcasts():
    cfg = _valid_cfg()
    assert cfg.agent_template(0) is cfg.agent_template(3)
    cfg4 = _valid_cfg(per_agent=tuple(AgentTemplate(offspring_size=i) for i in range(4)))
    assert cfg4.agent_template(2).offspring_size == 2


# --- JSON round trip --------------------------------------------------------


def test_config_round_trips_through_dict():
    cfg = load_preset("large_society")
    again = config_from_dict(config_to_dict(cfg))
    assert again == cfg


def test_config_rejects_unknown_fields():
    d = config_to_dict(load_preset("exploration"))
    d["warp"] = 9
    with pytest.raises(ConfigError, match="warp"):
        config_from_dict(d)
    d.pop("warp")
    d["per_agent"]["mystery"] = 1
    with pytest.raises(ConfigError, match="mystery"):
        config_from_dict(d)


def test_config_file_round_trip(tmp_path):
    cfg = load_preset("small_society")
    path = tmp_path / "cfg.json"
    dump_config(cfg, path)
    assert load_config(path) == cfg


def test_island_model_config_omits_credibility(tmp_path):
    cfg = load_preset("island_model")
    assert cfg.credibility is None
    d = config_to_dict(cfg)
    assert "credibility" not in d
    assert config_from_dict(d).credibility is None


# --- preset table -----------------------------------------------------------

PRESET_TABLE = {
    # name: (N, epoch, kind, start, intensity, gene_op, d_f)
    "strong_leadership": (10, 25, "reputation", 50, "moderate", "swap", 1.3),
    "exploration": (10, 25, "trust", 25, "strong", "average", 1.3),
    "small_society": (5, 25, "trust", 5, "strong", "swap", 1.3),
    "large_society": (20, 50, "reputation", 30, "weak", "swap", 1.3),
    "high_diversity": (10, 25, "reputation", 40, "moderate", "swap", 2.0),
}


@pytest.mark.parametrize("name", sorted(PRESET_TABLE))
def test_society_preset_parameters(name):
    n, epoch, kind, start, intensity, gene_op, d_f = PRESET_TABLE[name]
    cfg = load_preset(name)
    tpl = cfg.per_agent[0]
    assert cfg.algorithm == "tbo"
    assert cfg.agent_count == n
    assert cfg.epoch_length == epoch
    assert cfg.credibility.kind == kind
    assert cfg.credibility.start_value == start
    assert tpl.genome_intensity == intensity
    assert tpl.gene_op == gene_op
    assert cfg.diversity_factor == d_f


@pytest.mark.parametrize("name", sorted(PRESET_TABLE) + ["island_model"])
def test_every_preset_shares_ea_constants(name):
    cfg = load_preset(name)
    tpl = cfg.per_agent[0]
    assert tpl.population_size == 5
    assert tpl.offspring_size == 15
    assert tpl.base_crossover_rate == 0.005
    assert tpl.base_mutation_rate == 0.0005
    assert cfg.eta_m == 40.0


def test_baseline_preset_has_no_credibility():
    cfg = load_preset("island_model")
    assert cfg.algorithm == "island_model"
    assert cfg.credibility is None


def test_preset_accepts_display_names():
    assert load_preset("Strong leadership") == load_preset("strong_leadership")
    with pytest.raises(KeyError):
        load_preset("anarchy")


# --- stream derivation ------------------------------------------------------


def test_agent_stream_is_deterministic():
    a = agent_stream(99, 2, 3).random(8)
    b = agent_stream(99, 2, 3).random(8)
    assert np.array_equal(a, b)


def test_agent_streams_differ_across_slots():
    draws = {
        (rep, idx): tuple(agent_stream(5, rep, idx).random(4))
        for rep in range(3)
        for idx in range(3)
    }
    assert len(set(draws.values())) == 9


def test_agent_stream_rejects_negative_slots():
    with pytest.raises(ValueError):
        agent_stream(1, -1, 0)


def test_derive_run_seed_is_stable_and_label_sensitive():
    s = derive_run_seed(42, "sphere", 50, "tbo")
    assert s == derive_run_seed(42, "sphere", 50, "tbo")
    assert s != derive_run_seed(42, "sphere", 50, "island_model")
    assert s != derive_run_seed(42, "griewank", 50, "tbo")
    assert s != derive_run_seed(43, "sphere", 50, "tbo")
    assert 0 <= s < 2**64
