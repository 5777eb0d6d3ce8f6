"""Run configuration: schema, validation and JSON round-trip.

A :class:`TboConfig` fully describes one run (or its repetitions): the
society size, objective binding, epoch clock, credibility model, per-agent
EA/interaction parameters and engine knobs.  ``validate_config`` collects
every violation instead of stopping at the first one.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

from .benchmarks import OBJECTIVE_NAMES
from .types import CREDIBILITY_KINDS, GENE_OPS, GENOME_INTENSITIES

__all__ = [
    "AgentTemplate",
    "CredibilityConfig",
    "TboConfig",
    "ConfigError",
    "validate_config",
    "config_to_dict",
    "config_from_dict",
    "load_config",
    "dump_config",
    "ALGORITHMS",
]

ALGORITHMS = ("tbo", "island_model")


class ConfigError(ValueError):
    """Carries every validation violation found in one pass."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class AgentTemplate:
    """EA and interaction parameters of one agent (or of all agents when a
    single template is given)."""

    population_size: int = 5
    offspring_size: int = 15
    base_crossover_rate: float = 0.005
    base_mutation_rate: float = 0.0005
    genome_intensity: str = "moderate"
    gene_op: str = "swap"
    # reserved heterogeneity hook; the engine is synchronous, so a value
    # different from the run-level epoch_length is rejected
    epoch_length: Optional[int] = None


@dataclass(frozen=True)
class CredibilityConfig:
    kind: str = "trust"
    start_value: int = 25
    min_value: int = 1
    max_value: int = 50


@dataclass(frozen=True)
class TboConfig:
    """Complete description of one optimisation run."""

    agent_count: int
    dimension: int
    objective: str
    epoch_length: int
    diversity_factor: float
    max_steps: int
    seed: int
    repetitions: int = 1
    algorithm: str = "tbo"
    credibility: Optional[CredibilityConfig] = field(default_factory=CredibilityConfig)
    per_agent: tuple[AgentTemplate, ...] = (AgentTemplate(),)
    objective_params: dict = field(default_factory=dict)
    # engine / operator knobs
    eta_c: float = 20.0
    eta_m: float = 40.0
    crossover_scope: str = "gene"  # "gene" | "pair"
    partner_policy: str = "redraw"  # "redraw" | "fixed"
    first_step: int = 1  # 1: first epoch after epoch_length EA steps; 0: interaction at t=0

    def agent_template(self, index: int) -> AgentTemplate:
        """Template for agent ``index`` (a single template applies to all)."""
        if len(self.per_agent) == 1:
            return self.per_agent[0]
        return self.per_agent[index]


def validate_config(cfg: TboConfig) -> None:
    """Check every schema constraint, raising :class:`ConfigError` with the
    full list of violations when any fail."""
    bad: list[str] = []

    if cfg.algorithm not in ALGORITHMS:
        bad.append(f"algorithm must be one of {ALGORITHMS}, got {cfg.algorithm!r}")
    if cfg.agent_count < 2:
        bad.append("agent_count must be >= 2")
    if cfg.dimension < 1:
        bad.append("dimension must be >= 1")
    if cfg.objective not in OBJECTIVE_NAMES:
        bad.append(f"unknown objective: {cfg.objective!r}")
    if cfg.epoch_length < 1:
        bad.append("epoch_length must be >= 1")
    if cfg.diversity_factor < 0:
        bad.append("diversity_factor must be >= 0")
    if cfg.max_steps < 1:
        bad.append("max_steps must be >= 1")
    if not (0 <= cfg.seed < 2**64):
        bad.append("seed must be an unsigned 64-bit integer")
    if cfg.repetitions < 1:
        bad.append("repetitions must be >= 1")
    if cfg.first_step not in (0, 1):
        bad.append("first_step must be 0 or 1")
    if cfg.crossover_scope not in ("gene", "pair"):
        bad.append("crossover_scope must be 'gene' or 'pair'")
    if cfg.partner_policy not in ("redraw", "fixed"):
        bad.append("partner_policy must be 'redraw' or 'fixed'")
    if cfg.eta_c <= 0:
        bad.append("eta_c must be > 0")
    if cfg.eta_m <= 0:
        bad.append("eta_m must be > 0")

    if cfg.algorithm == "tbo":
        c = cfg.credibility
        if c is None:
            bad.append("credibility section required for the tbo algorithm")
        else:
            if c.kind not in CREDIBILITY_KINDS:
                bad.append(f"credibility kind must be one of {CREDIBILITY_KINDS}")
            if c.min_value < 1:
                bad.append("credibility min_value must be >= 1")
            if c.max_value < c.min_value:
                bad.append("credibility max_value below min_value")
            if c.start_value < c.min_value:
                bad.append(f"credibility start below min ({c.start_value} < {c.min_value})")
            if c.start_value > c.max_value:
                bad.append(f"credibility start above max ({c.start_value} > {c.max_value})")

    if len(cfg.per_agent) not in (1, cfg.agent_count):
        bad.append(
            f"per_agent must hold 1 or agent_count={cfg.agent_count} templates, got {len(cfg.per_agent)}"
        )
    for i, t in enumerate(cfg.per_agent):
        tag = f"per_agent[{i}]"
        if t.population_size < 1:
            bad.append(f"{tag}: population_size must be >= 1")
        if t.offspring_size < 0:
            bad.append(f"{tag}: offspring_size must be >= 0")
        if not (0.0 <= t.base_crossover_rate <= 1.0):
            bad.append(f"{tag}: base_crossover_rate must lie in [0, 1]")
        if not (0.0 <= t.base_mutation_rate <= 1.0):
            bad.append(f"{tag}: base_mutation_rate must lie in [0, 1]")
        if t.genome_intensity not in GENOME_INTENSITIES:
            bad.append(f"{tag}: genome_intensity must be one of {GENOME_INTENSITIES}")
        if t.gene_op not in GENE_OPS:
            bad.append(f"{tag}: gene_op must be one of {GENE_OPS}")
        if t.epoch_length is not None and t.epoch_length != cfg.epoch_length:
            bad.append(
                f"{tag}: per-agent epoch_length {t.epoch_length} differs from the run value; "
                "the synchronous engine does not support heterogeneous epochs"
            )

    if not isinstance(cfg.objective_params, dict):
        bad.append("objective_params must be a mapping")

    if bad:
        raise ConfigError(bad)


def config_to_dict(cfg: TboConfig) -> dict:
    """Plain-JSON form of a config; field names mirror the dataclass."""
    d = asdict(cfg)
    if cfg.credibility is None:
        d.pop("credibility")
    # a single shared template serialises as an object, a full list as a list
    agents = d.pop("per_agent")
    for a in agents:
        if a.get("epoch_length") is None:
            a.pop("epoch_length")
    d["per_agent"] = agents[0] if len(agents) == 1 else agents
    if not d["objective_params"]:
        d.pop("objective_params")
    return d


def config_from_dict(data: dict) -> TboConfig:
    """Inverse of :func:`config_to_dict`; unknown keys are rejected."""
    data = dict(data)
    known = {
        "agent_count", "dimension", "objective", "epoch_length", "diversity_factor",
        "max_steps", "seed", "repetitions", "algorithm", "credibility", "per_agent",
        "objective_params", "eta_c", "eta_m", "crossover_scope", "partner_policy",
        "first_step",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError([f"unknown config field: {k}" for k in sorted(unknown)])

    cred = data.get("credibility")
    if cred is not None:
        extra = set(cred) - {"kind", "start_value", "min_value", "max_value"}
        if extra:
            raise ConfigError([f"unknown credibility field: {k}" for k in sorted(extra)])
        data["credibility"] = CredibilityConfig(**cred)
    elif "credibility" in data:
        data["credibility"] = None
    elif data.get("algorithm", "tbo") != "tbo":
        data["credibility"] = None

    pa = data.get("per_agent", AgentTemplate())
    if isinstance(pa, dict):
        data["per_agent"] = (_template_from_dict(pa),)
    elif isinstance(pa, (list, tuple)):
        data["per_agent"] = tuple(_template_from_dict(t) if isinstance(t, dict) else t for t in pa)

    return TboConfig(**data)


def _template_from_dict(d: dict) -> AgentTemplate:
    extra = set(d) - {
        "population_size", "offspring_size", "base_crossover_rate",
        "base_mutation_rate", "genome_intensity", "gene_op", "epoch_length",
    }
    if extra:
        raise ConfigError([f"unknown per_agent field: {k}" for k in sorted(extra)])
    return AgentTemplate(**d)


def load_config(path: Union[str, Path]) -> TboConfig:
    """Load, parse and validate a JSON config file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    cfg = config_from_dict(data)
    validate_config(cfg)
    return cfg


def dump_config(cfg: TboConfig, path: Union[str, Path, None] = None) -> str:
    """Serialise a config to pretty JSON; optionally write it to ``path``."""
    text = json.dumps(config_to_dict(cfg), indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def with_cell(cfg: TboConfig, *, objective: str, dimension: int, max_steps: int,
              seed: int, repetitions: int) -> TboConfig:
    """Copy a preset config re-bound to one experiment cell."""
    return replace(cfg, objective=objective, dimension=dimension,
                   max_steps=max_steps, seed=seed, repetitions=repetitions)
