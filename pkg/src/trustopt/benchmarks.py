"""Benchmark objective functions (continuous minimisation).

All functions accept an array whose last axis is the genome dimension and
evaluate along that axis, so a single genome ``(D,)`` yields a scalar and a
population block ``(n, D)`` yields ``(n,)``.

The registry (:func:`get_objective`) wraps each function in an
:class:`ObjectiveSpec` carrying its search box, known optimum and noise flag.
Registered names::

    sphere, griewank, rastrigin, expanded_schaffer, schwefel_noise,
    lennard_jones
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "sphere",
    "griewank",
    "rastrigin",
    "expanded_schaffer",
    "schwefel_noisy",
    "lennard_jones",
    "ObjectiveSpec",
    "get_objective",
    "OBJECTIVE_NAMES",
]

# Lennard-Jones pair distances below this contribute a fixed large penalty
# instead of overflowing.
_LJ_R_MIN = 1e-12
_LJ_PENALTY = 1e12

_triu_cache: dict = {}


def _pair_indices(p: int) -> tuple[np.ndarray, np.ndarray]:
    if p not in _triu_cache:
        _triu_cache[p] = np.triu_indices(p, k=1)
    return _triu_cache[p]


def sphere(x: np.ndarray) -> np.ndarray | float:
    """Sum of squares; minimum 0 at the origin."""
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1)


def griewank(x: np.ndarray) -> np.ndarray | float:
    """Griewank function; minimum 0 at the origin.

    The cosine product indexes dimensions from 1.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    idx = np.sqrt(np.arange(1, d + 1, dtype=float))
    return np.sum(x * x, axis=-1) / 4000.0 - np.prod(np.cos(x / idx), axis=-1) + 1.0


def rastrigin(x: np.ndarray) -> np.ndarray | float:
    """Rastrigin function; minimum 0 at the origin."""
    x = np.asarray(x, dtype=float)
    return np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x) + 10.0, axis=-1)


def expanded_schaffer(x: np.ndarray) -> np.ndarray | float:
    """Expanded Schaffer function over consecutive gene pairs.

    Sum over i = 1..D-1 of the two-variable Schaffer term on
    (x_i, x_{i+1}); no wrap-around pair.  Each term lies in [0, 1], the
    minimum 0 is at the origin.  Requires D >= 2.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] < 2:
        raise ValueError("expanded_schaffer requires dimension >= 2")
    a = x[..., :-1]
    b = x[..., 1:]
    s = a * a + b * b
    num = np.sin(np.sqrt(s)) ** 2 - 0.5
    den = (1.0 + 0.001 * s) ** 2
    return np.sum(0.5 + num / den, axis=-1)


def schwefel_noisy(
    x: np.ndarray,
    rng: Optional[np.random.Generator] = None,
    noise_sigma: float = 0.0,
) -> np.ndarray | float:
    """Schwefel function with additive Gaussian evaluation noise.

    ``418.9829 * D - sum(x_i * sin(sqrt(|x_i|)))`` plus one
    ``Normal(0, noise_sigma)`` draw per evaluated genome.  With
    ``noise_sigma=0`` the function is deterministic with minimum close to 0
    at all genes equal to 420.9687.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    base = 418.9829 * d - np.sum(x * np.sin(np.sqrt(np.abs(x))), axis=-1)
    if noise_sigma > 0.0:
        if rng is None:
            raise ValueError("schwefel_noisy with noise_sigma > 0 needs a Generator")
        base = base + rng.normal(0.0, noise_sigma, size=np.shape(base))
    return base


def lennard_jones(x: np.ndarray, a: float = 1.0, b: float = 2.0) -> np.ndarray | float:
    """Lennard-Jones cluster potential.

    The genome is read as ``P = floor(D / 3)`` particle coordinates from
    consecutive ``(x, y, z)`` triples; leftover genes are ignored.  The value
    is ``sum_{i<j} a / r_ij^12 - b / r_ij^6``.  A pair closer than 1e-12
    contributes a fixed 1e12 penalty instead of a near-singular value.
    Requires at least two particles (D >= 6).
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    p = d // 3
    if p < 2:
        raise ValueError("lennard_jones requires at least 2 particles (dimension >= 6)")
    pts = x[..., : 3 * p].reshape(x.shape[:-1] + (p, 3))
    iu, ju = _pair_indices(p)
    # one contiguous (P, P) difference grid per coordinate beats gathering
    # two (pairs, 3) blocks; the summation order matches the direct
    # sum(diff * diff, axis=-1) formulation bit for bit
    coords = np.ascontiguousarray(np.moveaxis(pts, -1, 0))
    r2_grid = None
    for k in range(3):
        c = coords[k]
        d = c[..., :, None] - c[..., None, :]
        d *= d
        r2_grid = d if r2_grid is None else r2_grid + d
    r2 = r2_grid[..., iu, ju]
    close = r2 < _LJ_R_MIN * _LJ_R_MIN
    masked = bool(close.any())
    if masked:
        r2 = np.where(close, 1.0, r2)  # placeholder; overwritten below
    inv6 = r2 * r2 * r2
    np.divide(1.0, inv6, out=inv6)
    pair = a * inv6 * inv6 - b * inv6
    if masked:
        pair = np.where(close, _LJ_PENALTY, pair)
    return np.sum(pair, axis=-1)


@dataclass(frozen=True)
class ObjectiveSpec:
    """A benchmark objective bound to a concrete dimension.

    Attributes
    ----------
    name : str
        Registry name.
    dimension : int
        Genome length D.
    lower, upper : ndarray, shape (D,)
        Search box; initialisation and variation clamp to it.
    noisy : bool
        True when evaluations carry fresh noise.  Noisy fitness values are
        never cached across global steps.
    optimum_value : float or None
        Known global minimum value, when available.
    optimum_location : ndarray or None
        A known minimiser, when available.
    """

    name: str
    dimension: int
    lower: np.ndarray
    upper: np.ndarray
    noisy: bool
    _fn: Callable[..., np.ndarray] = field(repr=False)
    optimum_value: Optional[float] = None
    optimum_location: Optional[np.ndarray] = field(default=None, repr=False)
    noise_sigma: float = 0.0

    def base(self, genes: np.ndarray):
        """Evaluate without noise: one genome ``(D,)`` or a block ``(n, D)``."""
        genes = np.asarray(genes, dtype=float)
        if genes.shape[-1] != self.dimension:
            raise ValueError(
                f"genome dimension {genes.shape[-1]} != objective dimension {self.dimension}"
            )
        return self._fn(genes)

    def evaluate(self, genes: np.ndarray, rng: Optional[np.random.Generator] = None):
        """Evaluate one genome ``(D,)`` or a block ``(n, D)``.

        ``rng`` is required for noisy objectives (one Normal(0, noise_sigma)
        draw per genome, added to the noise-free value) and ignored
        otherwise.
        """
        vals = self.base(genes)
        if self.noisy:
            if rng is None:
                raise ValueError(f"{self.name} is noisy and needs a Generator")
            vals = vals + rng.normal(0.0, self.noise_sigma, size=np.shape(vals))
        return vals


def _box(value: float, dimension: int) -> tuple[np.ndarray, np.ndarray]:
    full = np.full(dimension, float(value))
    return -full, full


def get_objective(name: str, dimension: int, **params) -> ObjectiveSpec:
    """Construct a registered objective at a given dimension.

    Supported ``params``: ``noise_sigma`` for ``schwefel_noise`` (default
    ``0.01 * dimension``), ``a`` and ``b`` for ``lennard_jones`` (defaults
    1 and 2).  Unknown names or parameters raise ``ValueError``.
    """
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    known = {"sphere", "griewank", "rastrigin", "expanded_schaffer", "schwefel_noise", "lennard_jones"}
    if name not in known:
        raise ValueError(f"unknown objective: {name!r}")

    if name == "schwefel_noise":
        allowed = {"noise_sigma"}
    elif name == "lennard_jones":
        allowed = {"a", "b"}
    else:
        allowed = set()
    extra = set(params) - allowed
    if extra:
        raise ValueError(f"objective {name!r} does not accept parameters {sorted(extra)}")

    if name == "sphere":
        lo, hi = _box(100.0, dimension)
        return ObjectiveSpec(name, dimension, lo, hi, False, sphere,
                             optimum_value=0.0, optimum_location=np.zeros(dimension))
    if name == "griewank":
        lo, hi = _box(600.0, dimension)
        return ObjectiveSpec(name, dimension, lo, hi, False, griewank,
                             optimum_value=0.0, optimum_location=np.zeros(dimension))
    if name == "rastrigin":
        lo, hi = _box(5.12, dimension)
        return ObjectiveSpec(name, dimension, lo, hi, False, rastrigin,
                             optimum_value=0.0, optimum_location=np.zeros(dimension))
    if name == "expanded_schaffer":
        if dimension < 2:
            raise ValueError("expanded_schaffer requires dimension >= 2")
        lo, hi = _box(100.0, dimension)
        return ObjectiveSpec(name, dimension, lo, hi, False, expanded_schaffer,
                             optimum_value=0.0, optimum_location=np.zeros(dimension))
    if name == "schwefel_noise":
        sigma = float(params.get("noise_sigma", 0.01 * dimension))
        if sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        lo, hi = _box(500.0, dimension)
        return ObjectiveSpec(name, dimension, lo, hi, sigma > 0.0, schwefel_noisy,
                             optimum_value=None,
                             optimum_location=np.full(dimension, 420.9687),
                             noise_sigma=sigma)
    # lennard_jones
    if dimension < 6:
        raise ValueError("lennard_jones requires at least 2 particles (dimension >= 6)")
    a = float(params.get("a", 1.0))
    b = float(params.get("b", 2.0))

    def fn(genes, _a=a, _b=b):
        return lennard_jones(genes, a=_a, b=_b)

    lo, hi = _box(3.0, dimension)
    return ObjectiveSpec(name, dimension, lo, hi, False, fn)


OBJECTIVE_NAMES = (
    "sphere",
    "griewank",
    "rastrigin",
    "expanded_schaffer",
    "schwefel_noise",
    "lennard_jones",
)
