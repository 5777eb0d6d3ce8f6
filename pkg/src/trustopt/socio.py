"""Credibility-gated interactions between agents.

At every epoch boundary an agent receives candidate solutions from one
other agent instead of running an EA step.  Credibility (pairwise trust or
public reputation) gates both ends of the exchange:

* the credibility the sender assigns to the recipient sizes the share: the
  ``m = min(credibility, sender population size)`` worst members are sent;
* the credibility the recipient assigns to the sender sets the adoption
  depth ``K = min(credibility, D)``: how many of the most divergent genes
  of a resident genome are overwritten by (or averaged with) received
  values, and how many offspring each shared member spawns.

A share whose mean fitness exceeds the acceptance threshold (twice the
recipient's mean when that mean is positive, zero otherwise) is rejected
outright and the recipient keeps its population.  Otherwise offspring are
resident genomes reshaped by received ones and merged through the same
mu+lambda elitist replacement the EA uses.  Improvement raises the
sender's standing, rejection lowers it, anything else leaves it unchanged.

Draw discipline (recipient's stream): partner indices are drawn in shared-
member order, one draw per offspring under the "redraw" policy or one per
shared member under "fixed"; a rejected share consumes no partner draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .benchmarks import ObjectiveSpec
from .ea import replace_mu_plus_lambda
from .types import (
    AgentState,
    CredibilityState,
    Population,
    ScCrossoverConfig,
    evaluate_population,
    mean_fitness,
)

__all__ = [
    "SharedPopulation",
    "TrustDelta",
    "ReputationDelta",
    "InteractionOutcome",
    "select_shared",
    "acceptance_threshold",
    "divergence_ranking",
    "phi",
    "sc_crossover",
    "sc_variation",
    "update_trust",
    "update_reputation",
    "interaction_step",
]


@dataclass(frozen=True)
class SharedPopulation:
    """Copies of the members a sender contributes to one interaction.

    ``indices`` are the members' positions in the sender population at
    selection time; mutating the copies never touches the sender.
    """

    genes: np.ndarray
    fitness: np.ndarray
    indices: np.ndarray

    @property
    def size(self) -> int:
        return self.genes.shape[0]

    def mean_fitness(self) -> float:
        return float(np.mean(self.fitness))


@dataclass(frozen=True)
class TrustDelta:
    """Requested change of one trust cell (row truster, column trustee)."""

    truster: int
    trustee: int
    delta: int


@dataclass(frozen=True)
class ReputationDelta:
    """Requested change of one agent's reputation."""

    agent: int
    delta: int


@dataclass
class InteractionOutcome:
    """Everything one interaction produced.

    ``accepted`` is False exactly when the share failed the threshold; the
    recipient population is then unchanged.  ``improved`` implies
    ``accepted``.  ``credibility_deltas`` holds the raw requested changes;
    the engine applies them (with clamping) after all interactions of the
    step.
    """

    recipient: int
    sender: int
    accepted: bool
    improved: bool
    population: Population
    credibility_deltas: tuple[Union[TrustDelta, ReputationDelta], ...]
    mean_before: float
    mean_after: float
    mean_shared: float
    threshold: float


def select_shared(
    sender_pop: Population,
    objective: ObjectiveSpec,
    credibility_in: int,
    rng: Optional[np.random.Generator] = None,
) -> SharedPopulation:
    """Pick the ``min(credibility_in, n)`` worst members of the sender.

    "Worst" means highest fitness under minimisation: exactly the members
    whose count of strictly better peers is at least ``n - credibility``.
    Ties are broken by insertion order.  The result holds copies.
    """
    if credibility_in < 1:
        raise ValueError("credibility_in must be >= 1")
    if sender_pop.size < 1:
        raise ValueError("sender population is empty")
    fit = evaluate_population(sender_pop, objective, rng)
    m = min(int(credibility_in), sender_pop.size)
    order = np.argsort(-fit, kind="stable")[:m]
    return SharedPopulation(sender_pop.genes[order].copy(), fit[order].copy(), order.copy())


def acceptance_threshold(
    recipient_pop: Population,
    objective: ObjectiveSpec,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Twice the recipient's mean fitness when positive, else zero."""
    mean = mean_fitness(recipient_pop, objective, rng)
    return 2.0 * mean if mean > 0.0 else 0.0


def divergence_ranking(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Gene indices ordered by descending |x - y|, ties by ascending index."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if y.shape != x.shape or y.ndim != 1:
        raise ValueError("genomes must be 1-D and of equal length")
    return np.argsort(-np.abs(x - y), kind="stable")


def phi(y: np.ndarray, x: np.ndarray, k: int, gene_op: str) -> np.ndarray:
    """Rewrite the ``k`` most divergent genes of ``y`` using ``x``.

    "swap" copies the partner gene, "average" takes the midpoint; all other
    genes pass through.  ``k`` is clamped to the dimension.  Returns a new
    genome; the inputs are untouched.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if gene_op not in ("swap", "average"):
        raise ValueError("gene_op must be 'swap' or 'average'")
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    idx = divergence_ranking(y, x)[: min(k, len(y))]
    out = y.copy()
    out[idx] = x[idx] if gene_op == "swap" else 0.5 * (y[idx] + x[idx])
    return out


def _phi_batch(y: np.ndarray, x: np.ndarray, k: int, gene_op: str) -> np.ndarray:
    """Vectorised :func:`phi` over matching (B, D) blocks."""
    b, d = y.shape
    order = np.argsort(-np.abs(x - y), axis=1, kind="stable")[:, : min(k, d)]
    mask = np.zeros((b, d), dtype=bool)
    mask[np.arange(b)[:, None], order] = True
    if gene_op == "swap":
        return np.where(mask, x, y)
    return np.where(mask, 0.5 * (x + y), y)


def sc_crossover(
    recipient_pop: Population,
    shared: SharedPopulation,
    credibility_out: int,
    cfg: ScCrossoverConfig,
    rng: np.random.Generator,
    partner_policy: str = "redraw",
) -> Population:
    """Build interaction offspring: resident genomes adopting received genes.

    Each offspring starts from a resident partner genome and takes gene
    values from one shared member at the positions where the two diverge
    most.  With ``K = min(credibility_out, D)`` and ``m`` shared members:

    * weak:     one offspring per shared member, K genes adopted;
    * moderate: K offspring per shared member, K genes adopted each;
    * strong:   K offspring per shared member, one gene adopted each.

    Partners come from the recipient population uniformly at random, a
    fresh draw per offspring ("redraw") or one per shared member reused for
    all its offspring ("fixed").  Offspring fitness starts unevaluated.
    """
    if credibility_out < 1:
        raise ValueError("credibility_out must be >= 1")
    if partner_policy not in ("redraw", "fixed"):
        raise ValueError("partner_policy must be 'redraw' or 'fixed'")
    n, d = recipient_pop.genes.shape
    m = shared.size
    if m < 1:
        raise ValueError("shared population is empty")
    k = min(int(credibility_out), d)

    # Offspring are resident genomes reshaped by received ones: the drawn
    # recipient member is the base (phi's first argument), the shared member
    # supplies the gene values.  At full depth under swap an offspring is a
    # copy of the received genome, so credibility directly scales how much
    # foreign material the recipient adopts.
    if cfg.genome_intensity == "weak":
        partners = rng.integers(0, n, size=m)
        z = shared.genes
        x = recipient_pop.genes[partners]
        children = _phi_batch(x, z, k, cfg.gene_op)
    else:
        if partner_policy == "redraw":
            partners = rng.integers(0, n, size=(m, k)).ravel()
        else:
            partners = np.repeat(rng.integers(0, n, size=m), k)
        z = np.repeat(shared.genes, k, axis=0)
        x = recipient_pop.genes[partners]
        depth = k if cfg.genome_intensity == "moderate" else 1
        children = _phi_batch(x, z, depth, cfg.gene_op)
    return Population.from_genes(children)


def sc_variation(
    recipient_pop: Population,
    shared: SharedPopulation,
    credibility_out: int,
    cfg: ScCrossoverConfig,
    objective: ObjectiveSpec,
    rng: np.random.Generator,
    partner_policy: str = "redraw",
) -> tuple[Population, bool]:
    """Threshold-gated variation plus elitist merge.

    Returns ``(population, accepted)``.  A share whose mean fitness exceeds
    :func:`acceptance_threshold` is rejected: the recipient population is
    returned unchanged and no partner draws are consumed.  Otherwise the
    offspring of :func:`sc_crossover` are merged by mu+lambda replacement
    at the recipient's size.
    """
    eps = acceptance_threshold(recipient_pop, objective, rng)
    if shared.mean_fitness() > eps:
        return recipient_pop, False
    offspring = sc_crossover(recipient_pop, shared, credibility_out, cfg, rng, partner_policy)
    merged = replace_mu_plus_lambda(recipient_pop, offspring, recipient_pop.size, objective, rng)
    return merged, True


def _branch(mean_before: float, mean_after: float, mean_shared: float, threshold: float) -> int:
    """+1 improvement, -1 rejected share, 0 otherwise.

    Improvement is checked first; in a real interaction the two cases are
    mutually exclusive because a rejected share leaves the mean unchanged.
    """
    if mean_after < mean_before:
        return 1
    if mean_shared > threshold:
        return -1
    return 0


def update_trust(
    trust: int,
    mean_before: float,
    mean_after: float,
    mean_shared: float,
    threshold: float,
    c_min: int = 1,
    c_max: int = 50,
) -> int:
    """Recipient-side trust update for one interaction.

    Improvement adds one (capped at ``c_max``), a rejected share subtracts
    one (floored at ``c_min``), anything else leaves the value alone.
    """
    b = _branch(mean_before, mean_after, mean_shared, threshold)
    if b > 0:
        return min(c_max, trust + 1)
    if b < 0:
        return max(c_min, trust - 1)
    return trust


def update_reputation(
    recipient_rep: int,
    sender_rep: int,
    mean_before: float,
    mean_after: float,
    mean_shared: float,
    threshold: float,
    c_min: int = 1,
    c_max: int = 50,
) -> tuple[int, int]:
    """Reputation token transfer for one interaction.

    Improvement moves a token from the recipient to the sender; a rejected
    share moves one the other way; both ends clamp to the bounds.  Returns
    ``(recipient_rep, sender_rep)``.
    """
    b = _branch(mean_before, mean_after, mean_shared, threshold)
    if b > 0:
        return max(c_min, recipient_rep - 1), min(c_max, sender_rep + 1)
    if b < 0:
        return min(c_max, recipient_rep + 1), max(c_min, sender_rep - 1)
    return recipient_rep, sender_rep


def interaction_step(
    recipient: AgentState,
    sender_pop: Population,
    sender_index: int,
    cred: CredibilityState,
    objective: ObjectiveSpec,
    rng: np.random.Generator,
    partner_policy: str = "redraw",
) -> InteractionOutcome:
    """Run one full interaction for ``recipient`` (updates it in place).

    ``sender_pop`` is a snapshot of the sender's population and is only
    read; ``cred`` supplies the credibility values and is not modified.
    The returned outcome carries the raw credibility deltas for the caller
    to apply (clamped) once all interactions of the step are done.
    """
    i = recipient.index
    j = int(sender_index)
    if i == j:
        raise ValueError("an agent cannot interact with itself")

    cred_in = cred.credibility_in(j, i)
    cred_out = cred.credibility_out(j, i)
    mean_before = mean_fitness(recipient.population, objective, rng)
    # same value sc_variation derives internally; the mean is cached
    eps = 2.0 * mean_before if mean_before > 0.0 else 0.0
    shared = select_shared(sender_pop, objective, cred_in, rng)
    new_pop, accepted = sc_variation(
        recipient.population, shared, cred_out, recipient.crossover_config,
        objective, rng, partner_policy,
    )
    recipient.population = new_pop
    mean_after = mean_fitness(new_pop, objective, rng)
    improved = mean_after < mean_before

    b = _branch(mean_before, mean_after, shared.mean_fitness(), eps)
    deltas: tuple[Union[TrustDelta, ReputationDelta], ...]
    if b == 0:
        deltas = ()
    elif cred.kind == "trust":
        deltas = (TrustDelta(i, j, b),)
    else:
        deltas = (ReputationDelta(i, -b), ReputationDelta(j, b))

    return InteractionOutcome(
        recipient=i,
        sender=j,
        accepted=accepted,
        improved=improved,
        population=new_pop,
        credibility_deltas=deltas,
        mean_before=mean_before,
        mean_after=mean_after,
        mean_shared=shared.mean_fitness(),
        threshold=eps,
    )
