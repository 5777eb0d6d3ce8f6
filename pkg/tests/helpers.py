"""Shared test utilities.

The linear objective reads gene 0, so a population's fitness values can be
prescribed exactly (including negative ones, which no shipped benchmark
reaches at will).
"""

from __future__ import annotations

import numpy as np

from trustopt import AgentState, ObjectiveSpec, Population, ScCrossoverConfig


def linear_objective(dimension: int = 2, bound: float = 1e6) -> ObjectiveSpec:
    """Objective whose value is the first gene; any fitness is reachable."""

    def first_gene(genes):
        return np.asarray(genes, dtype=float)[..., 0]

    full = np.full(dimension, float(bound))
    return ObjectiveSpec("linear", dimension, -full, full, False, first_gene)


def population_with_values(values, dimension: int = 2) -> Population:
    """Population whose linear-objective fitnesses equal ``values``."""
    values = np.asarray(values, dtype=float)
    genes = np.zeros((len(values), dimension))
    genes[:, 0] = values
    return Population.from_genes(genes)


def make_agent(
    pop: Population,
    index: int = 0,
    offspring_size: int = 4,
    pc: float = 0.9,
    pm: float = 0.2,
    intensity: str = "moderate",
    gene_op: str = "swap",
) -> AgentState:
    return AgentState(
        index=index,
        population=pop,
        offspring_size=offspring_size,
        base_crossover_rate=pc,
        base_mutation_rate=pm,
        effective_crossover_rate=pc,
        effective_mutation_rate=pm,
        crossover_config=ScCrossoverConfig(intensity, gene_op),
    )


def twin_rngs(seed: int = 0) -> tuple[np.random.Generator, np.random.Generator]:
    """Two generators that produce identical streams."""
    return np.random.default_rng(seed), np.random.default_rng(seed)
