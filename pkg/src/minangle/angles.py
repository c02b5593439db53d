"""Dihedral angles, vertex d-sines, and derived per-simplex metrics.

The dihedral angle between facets F_i and F_j is defined through the inner
product of their outward unit normals, cos(beta_ij) = -n_i . n_j.  The
d-sine generalizes the classical sine of a triangle angle to the solid
angle at a vertex of a d-simplex:

    sin_d(A_i) = d^(d-1) * meas_d(S)^(d-1)
                 / ( (d-1)! * prod_{j != i} meas_{d-1}(F_j) )

For d = 2 this reduces to the ordinary sine of the planar angle.  The two
notions are tied together by a product decomposition: the d-sine at A_i
factors into the (d-1)-sine of A_i inside the facet omitting the last
vertex, times the sines of the dihedral angles at that facet.  That
identity is the engine behind the regularity-condition equivalence checks
in :mod:`minangle.regularity`.

Simplices embedded with k < d are projected onto their affine hull before
any normals are taken, so subsimplex angles are intrinsic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, InvalidInputError
from .geometry import (
    DEFAULT_TOLERANCES,
    Simplex,
    ToleranceConfig,
    facet,
    is_degenerate,
    outward_unit_normals,
    project_intrinsic,
    simplex_measure,
)

__all__ = [
    "DihedralAngleSet",
    "ProductDecomposition",
    "VertexSineSet",
    "all_dihedral_angles",
    "ball_ratio",
    "d_sine",
    "dihedral_angle",
    "dihedral_sum",
    "inradius",
    "product_decomposition",
    "vertex_sines",
]

# Above this dimension the d-sine numerator/denominator mix factorially
# large and small factors; switch to log-domain accumulation.
_DIRECT_EVAL_MAX_DIM = 12


@dataclass(frozen=True)
class DihedralAngleSet:
    """All k(k+1)/2 dihedral angles of one simplex, plus its outward normals.

    Angles are keyed by the unordered facet pair (i, j) with i < j and are
    given in radians; ``normals`` are the outward unit normals of the
    intrinsically projected simplex, one row per facet.
    """

    simplex_dim: int
    angles: dict[tuple[int, int], float]
    normals: np.ndarray

    def angle(self, i: int, j: int) -> float:
        if i == j:
            raise InvalidInputError("dihedral angle needs two distinct facets")
        key = (i, j) if i < j else (j, i)
        try:
            return self.angles[key]
        except KeyError:
            raise InvalidInputError(
                f"facet pair {key} out of range for dimension {self.simplex_dim}"
            ) from None

    def values(self) -> list[float]:
        return list(self.angles.values())

    def min_angle(self) -> float:
        return min(self.angles.values())

    def max_angle(self) -> float:
        return max(self.angles.values())


@dataclass(frozen=True)
class VertexSineSet:
    """The d+1 vertex d-sines of a full-dimensional simplex."""

    sines: tuple[float, ...]

    def min_sine(self) -> float:
        return min(self.sines)


@dataclass(frozen=True)
class ProductDecomposition:
    """One vertex d-sine factored through the facet omitting the last vertex.

    ``product`` is sub_sine times the product of ``dihedral_sines`` (exact
    by construction); ``residual`` is its relative deviation from the
    directly evaluated ``d_sine``.  The residual is reported, not asserted:
    near-degenerate simplices legitimately produce large residuals and the
    caller needs the diagnostic.
    """

    vertex_index: int
    sub_sine: float
    dihedral_sines: tuple[float, ...]
    product: float
    d_sine: float
    residual: float


def _intrinsic(s: Simplex, cfg: ToleranceConfig | None) -> Simplex:
    return s if s.intrinsic_dim == s.ambient_dim else project_intrinsic(s, cfg)


def all_dihedral_angles(s: Simplex, cfg: ToleranceConfig | None = None) -> DihedralAngleSet:
    """Every dihedral angle of ``s``, computed from one set of normals.

    Embedded simplices (k < d) are projected onto their affine hull first,
    so the angles are intrinsic.  Requires intrinsic dimension >= 2.
    """
    cfg = cfg or DEFAULT_TOLERANCES
    k = s.intrinsic_dim
    if k < 2:
        raise InvalidInputError(f"dihedral angles need dimension >= 2, got {s!r}")
    normals = outward_unit_normals(_intrinsic(s, cfg), cfg)
    cosines = -(normals @ normals.T)
    if cfg.cosine_clamp:
        cosines = np.clip(cosines, -1.0, 1.0)
    angles = {
        (i, j): float(np.arccos(cosines[i, j]))
        for i in range(k + 1)
        for j in range(i + 1, k + 1)
    }
    return DihedralAngleSet(simplex_dim=k, angles=angles, normals=normals)


def dihedral_angle(s: Simplex, i: int, j: int, cfg: ToleranceConfig | None = None) -> float:
    """Dihedral angle in radians between facets F_i and F_j of ``s``.

    Symmetric in (i, j); the value lies in [0, pi] and strictly inside for
    nondegenerate simplices.
    """
    k = s.intrinsic_dim
    if not (0 <= i <= k and 0 <= j <= k):
        raise InvalidInputError(f"facet indices ({i}, {j}) out of range 0..{k}")
    if i == j:
        raise InvalidInputError("dihedral angle needs two distinct facets")
    return all_dihedral_angles(s, cfg).angle(i, j)


def _facet_measures(s: Simplex) -> list[float]:
    return [simplex_measure(facet(s, j).simplex) for j in range(s.intrinsic_dim + 1)]


def _require_full_dim(s: Simplex, what: str) -> int:
    d = s.ambient_dim
    if s.intrinsic_dim != d:
        raise InvalidInputError(f"{what} needs a full-dimensional simplex, got {s!r}")
    return d


def _dsine_from_measures(d: int, volume: float, facet_meas: list[float], i: int) -> float:
    others = [m for j, m in enumerate(facet_meas) if j != i]
    if volume == 0.0 or any(m == 0.0 for m in others):
        raise DegeneracyError("d-sine undefined: degenerate simplex or facet")
    if d <= _DIRECT_EVAL_MAX_DIM:
        return d ** (d - 1) * volume ** (d - 1) / (math.factorial(d - 1) * math.prod(others))
    log_value = (
        (d - 1) * (math.log(d) + math.log(volume))
        - math.lgamma(d)
        - math.fsum(math.log(m) for m in others)
    )
    return math.exp(log_value)


def d_sine(s: Simplex, i: int) -> float:
    """The d-sine of the solid angle at vertex ``i`` of a d-simplex.

    Requires a full-dimensional simplex with d >= 2 (project subsimplices
    first).  The value lies in (0, 1] for nondegenerate input; 1 is
    attained exactly at the corner of a right-angle (orthogonal-edge)
    simplex.

    Raises:
        InvalidInputError: if ``s`` is not full-dimensional, d < 2, or
            ``i`` is out of range.
        DegeneracyError: if the simplex or one of the facets opposite the
            other vertices is degenerate.
    """
    d = _require_full_dim(s, "d-sine")
    if d < 2:
        raise InvalidInputError("d-sine needs dimension >= 2")
    if not 0 <= i <= d:
        raise InvalidInputError(f"vertex index {i} out of range 0..{d}")
    if is_degenerate(s):
        raise DegeneracyError(f"d-sine undefined for degenerate {s!r}")
    return _dsine_from_measures(d, simplex_measure(s), _facet_measures(s), i)


def vertex_sines(s: Simplex) -> VertexSineSet:
    """All d+1 vertex d-sines, sharing one pass of measure computations."""
    d = _require_full_dim(s, "vertex sines")
    if d < 2:
        raise InvalidInputError("d-sine needs dimension >= 2")
    if is_degenerate(s):
        raise DegeneracyError(f"d-sine undefined for degenerate {s!r}")
    volume = simplex_measure(s)
    facet_meas = _facet_measures(s)
    return VertexSineSet(
        sines=tuple(_dsine_from_measures(d, volume, facet_meas, i) for i in range(d + 1))
    )


def product_decomposition(
    s: Simplex, i: int, cfg: ToleranceConfig | None = None
) -> ProductDecomposition:
    """Factor the d-sine at vertex ``i`` through the facet omitting the last vertex.

    The sub-sine is the (d-1)-sine of vertex ``i`` inside the facet
    conv{A_0..A_{d-1}} after intrinsic projection; the dihedral factors are
    sin(beta_j) for the angles between the facet omitting A_j and the facet
    omitting A_d, j != i.  Vertex ``i`` must belong to the shared facet
    (i < d); reorder the vertices first if it does not.
    """
    d = _require_full_dim(s, "product decomposition")
    if d < 3:
        raise InvalidInputError("product decomposition needs dimension >= 3")
    if not 0 <= i < d:
        raise InvalidInputError(
            f"vertex index {i} must lie in the facet omitting the last vertex "
            f"(0..{d - 1}); reorder the vertices first"
        )
    angle_set = all_dihedral_angles(s, cfg)
    dihedral_sines = tuple(
        math.sin(angle_set.angle(j, d)) for j in range(d) if j != i
    )
    shared_facet = project_intrinsic(facet(s, d).simplex, cfg)
    sub_sine = d_sine(shared_facet, i)
    product = sub_sine * math.prod(dihedral_sines)
    direct = d_sine(s, i)
    return ProductDecomposition(
        vertex_index=i,
        sub_sine=sub_sine,
        dihedral_sines=dihedral_sines,
        product=product,
        d_sine=direct,
        residual=abs(direct - product) / direct,
    )


def dihedral_sum(s: Simplex, cfg: ToleranceConfig | None = None) -> float:
    """Sum of all k(k+1)/2 dihedral angles, in radians.

    For any triangle this is pi; for a nondegenerate tetrahedron the sum
    lies strictly between 2*pi and 3*pi.
    """
    return math.fsum(all_dihedral_angles(s, cfg).values())


def inradius(s: Simplex) -> float:
    """Radius of the inscribed ball: d * meas_d(S) / sum of facet measures."""
    d = _require_full_dim(s, "inradius")
    if is_degenerate(s):
        raise DegeneracyError(f"inradius undefined for degenerate {s!r}")
    return d * simplex_measure(s) / math.fsum(_facet_measures(s))


def ball_ratio(s: Simplex) -> float:
    """Inradius divided by the diameter; scale-invariant, in (0, 1)."""
    return inradius(s) / s.diameter()
