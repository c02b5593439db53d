"""Deterministic simplex generators: reference shapes and degenerating families.

The regular and corner simplices are closed-form reference shapes (all
dihedral angles arccos(1/d); corner d-sine exactly 1).  The flatten and
needle families interpolate from the regular simplex down to a flat
sliver or a collapsed edge as the parameter t drops toward 0, which is
exactly the degeneration the regularity conditions are designed to catch.

Random simplices are reproducible across runs and across language ports:
coordinates come from a splitmix64 stream (seeded 64-bit mixing
generator), (d+1) vertices drawn row by row, each coordinate a uniform
double in [0, scale) built from the top 53 bits of the next output.
Rejection continues until the smallest vertex d-sine clears the requested
quality floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import vertex_sines
from .errors import GenerationError, InvalidInputError
from .geometry import Simplex, is_degenerate

__all__ = [
    "GeneratorSpec",
    "KINDS",
    "corner_simplex",
    "flatten_family",
    "generate",
    "needle_family",
    "random_simplex",
    "regular_simplex",
]

KINDS = ("regular", "corner", "flatten", "needle", "random")

_REJECTION_BUDGET = 10_000

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64: a 64-bit mixing generator with a one-word state.

    next_uint64 advances the state by the golden-ratio increment and
    applies the standard two-round xorshift-multiply finalizer.  uniform()
    maps the top 53 bits onto [0, 1).
    """

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        if seed < 0:
            raise InvalidInputError(f"seed must be nonnegative, got {seed}")
        self.state = seed & _MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        return (self.next_uint64() >> 11) * 2.0**-53


def _require_dim(d: int, minimum: int) -> None:
    if not isinstance(d, int) or d < minimum:
        raise InvalidInputError(f"dimension must be an integer >= {minimum}, got {d}")


def _require_scale(scale: float) -> None:
    if not scale > 0.0:
        raise InvalidInputError(f"scale must be positive, got {scale}")


def _require_param(t: float) -> None:
    if not 0.0 < t <= 1.0:
        raise InvalidInputError(f"family parameter must lie in (0, 1], got {t}")


def regular_simplex(d: int, scale: float = 1.0) -> Simplex:
    """Regular d-simplex with edge length ``scale``.

    Built by the iterative coordinate lift: vertex k sits above the
    centroid of the previous ones at height sqrt((k+1)/(2k)), which keeps
    every edge at unit length before scaling.
    """
    _require_dim(d, 2)
    _require_scale(scale)
    v = np.zeros((d + 1, d))
    v[1, 0] = 1.0
    for k in range(2, d + 1):
        v[k] = v[:k].mean(axis=0)
        v[k, k - 1] = math.sqrt((k + 1) / (2.0 * k))
    return Simplex(v * scale)


def corner_simplex(d: int, scale: float = 1.0) -> Simplex:
    """Corner (orthogonal-edge) d-simplex conv{0, scale*e_1, ..., scale*e_d}.

    Its d-sine at vertex 0 is exactly 1, the largest possible value.
    """
    _require_dim(d, 2)
    _require_scale(scale)
    v = np.zeros((d + 1, d))
    v[1:] = np.eye(d) * scale
    return Simplex(v)


def flatten_family(d: int, t: float, scale: float = 1.0) -> Simplex:
    """Sliver family: regular (d-1)-simplex base with an apex at height t*scale.

    The base has edge length ``scale`` and lies in the hyperplane x_d = 0;
    the apex sits over the base centroid.  At t = sqrt((d+1) / (2d)) the
    apex reaches the regular height and the simplex is regular; as t -> 0
    the cell flattens, its measure shrinking linearly in t while the
    largest dihedral angle climbs toward pi.
    """
    _require_dim(d, 3)
    _require_scale(scale)
    _require_param(t)
    base = regular_simplex(d - 1, scale).vertices
    lifted = np.hstack([base, np.zeros((d, 1))])
    apex = np.append(base.mean(axis=0), t * scale)
    return Simplex(np.vstack([lifted, apex]))


def needle_family(d: int, t: float, scale: float = 1.0) -> Simplex:
    """Needle family: regular simplex with one edge shrunk to t*scale.

    Vertex 1 is pulled toward vertex 0 along their shared edge; t = 1
    reproduces the regular simplex, t -> 0 collapses the edge.
    """
    _require_dim(d, 2)
    _require_scale(scale)
    _require_param(t)
    v = regular_simplex(d, scale).vertices.copy()
    v[1] = v[0] + t * (v[1] - v[0])
    return Simplex(v)


def random_simplex(
    d: int, seed: int = 0, scale: float = 1.0, min_quality: float = 0.0
) -> Simplex:
    """Reproducible random simplex drawn uniformly from the scale-cube.

    Vertices are redrawn until the simplex is nondegenerate (at the
    default tolerance) and its smallest vertex d-sine exceeds
    ``min_quality``.  The same (d, seed, scale, min_quality) always returns
    the same simplex.

    Raises:
        GenerationError: if the rejection budget (10^4 draws) runs out,
            which happens only for quality floors close to 1.
    """
    _require_dim(d, 2)
    _require_scale(scale)
    if not 0.0 <= min_quality < 1.0:
        raise InvalidInputError(f"min_quality must lie in [0, 1), got {min_quality}")
    stream = SplitMix64(seed)
    for _ in range(_REJECTION_BUDGET):
        coords = np.array(
            [[stream.uniform() * scale for _ in range(d)] for _ in range(d + 1)]
        )
        candidate = Simplex(coords)
        if is_degenerate(candidate):
            continue
        if vertex_sines(candidate).min_sine() > min_quality:
            return candidate
    raise GenerationError(
        f"no simplex with min d-sine > {min_quality} in {_REJECTION_BUDGET} draws "
        f"(d={d}, seed={seed})"
    )


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one generator invocation, as accepted by the CLI.

    ``param`` means the family parameter t for flatten/needle and the
    quality floor for random; regular and corner ignore it.
    """

    kind: str
    dim: int
    param: float | None = None
    seed: int = 0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        _require_dim(self.dim, 3 if self.kind == "flatten" else 2)
        _require_scale(self.scale)
        if self.kind in ("flatten", "needle") and self.param is not None:
            _require_param(self.param)
        if self.kind == "random":
            if self.seed < 0:
                raise InvalidInputError(f"seed must be nonnegative, got {self.seed}")
            if self.param is not None and not 0.0 <= self.param < 1.0:
                raise InvalidInputError(f"quality floor must lie in [0, 1), got {self.param}")


def generate(spec: GeneratorSpec) -> Simplex:
    """Run the generator described by ``spec``."""
    if spec.kind == "regular":
        return regular_simplex(spec.dim, spec.scale)
    if spec.kind == "corner":
        return corner_simplex(spec.dim, spec.scale)
    if spec.kind == "flatten":
        return flatten_family(spec.dim, 1.0 if spec.param is None else spec.param, spec.scale)
    if spec.kind == "needle":
        return needle_family(spec.dim, 1.0 if spec.param is None else spec.param, spec.scale)
    return random_simplex(
        spec.dim, spec.seed, spec.scale, 0.0 if spec.param is None else spec.param
    )
