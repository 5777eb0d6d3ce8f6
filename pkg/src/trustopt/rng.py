"""Deterministic random-stream derivation.

Every stochastic component of a run draws from a stream derived from a
single 64-bit root seed.  Derivation is done with ``numpy.random.SeedSequence``
spawn keys, never by arithmetic on the seed itself, so streams are
statistically independent and insensitive to the order in which they are
created.

Layout of the spawn key space:

* ``(repetition, agent_index)`` -- the stream owned by one agent in one
  repetition of a run.  An agent uses its stream for everything it does:
  population initialisation, selection, variation, partner/sender draws and
  objective noise.  Agent-level parallelism therefore cannot change results.
* experiment cells (problem x algorithm) receive distinct 64-bit run seeds
  derived from the root seed and the cell labels via :func:`derive_run_seed`;
  label strings are folded to integers with CRC-32 so the derivation does not
  depend on manifest ordering.
"""

from __future__ import annotations

import zlib

import numpy as np

__all__ = ["agent_stream", "derive_run_seed", "label_key"]


def label_key(label: str) -> int:
    """Map a text label to a stable 32-bit spawn-key component."""
    return zlib.crc32(label.encode("utf-8"))


def agent_stream(seed: int, repetition: int, agent_index: int) -> np.random.Generator:
    """Return the generator owned by ``agent_index`` in ``repetition``.

    Parameters
    ----------
    seed : int
        Run seed (64-bit unsigned).
    repetition : int
        Repetition counter, 0-based.
    agent_index : int
        Agent index, 0-based.
    """
    if repetition < 0 or agent_index < 0:
        raise ValueError("repetition and agent_index must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(repetition), int(agent_index)))
    return np.random.default_rng(ss)


def derive_run_seed(root_seed: int, *labels: str | int) -> int:
    """Derive a 64-bit run seed for one experiment cell.

    ``labels`` identify the cell (typically problem name, dimension and
    algorithm name).  Strings are folded with CRC-32, integers are used
    directly.  The same root seed and labels always give the same run seed.
    """
    key = tuple(label_key(x) if isinstance(x, str) else int(x) for x in labels)
    ss = np.random.SeedSequence(entropy=int(root_seed), spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint64)[0])
