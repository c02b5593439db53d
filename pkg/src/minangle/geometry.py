"""Geometric primitives for k-simplices embedded in R^d.

A simplex is an ordered list of vertex coordinates.  All k-dimensional
measures are computed from Gram determinants of the edge vectors, so that
facets and lower-dimensional subsimplices living inside a larger ambient
space go through exactly the same code path as full-dimensional ones.
Angles themselves live in :mod:`minangle.angles`; this module supplies the
measures, frames, projections, and outward normals they are built from.

All functions here are pure: nothing mutates its inputs and there is no
global state, so values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, InvalidInputError

__all__ = [
    "DEFAULT_TOLERANCES",
    "Facet",
    "Simplex",
    "ToleranceConfig",
    "facet",
    "is_degenerate",
    "orthonormal_frame",
    "outward_unit_normal",
    "outward_unit_normals",
    "project_intrinsic",
    "simplex_measure",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical policy shared by the geometric and angular operations.

    Attributes:
        degeneracy_rel_tol: relative degeneracy threshold.  A k-simplex is
            treated as degenerate when sqrt(det G) <= tol * (max edge)^k,
            which makes the test invariant under uniform scaling.
        cosine_clamp: clamp arccos arguments into [-1, 1].  Rounding can
            push |n_i . n_j| a few ulp above 1; leave this on.
        angle_unit: "radians" or "degrees", used only at the reporting
            boundary.  Internal computation is always in radians.
    """

    degeneracy_rel_tol: float = 1e-12
    cosine_clamp: bool = True
    angle_unit: str = "radians"

    def __post_init__(self) -> None:
        if not self.degeneracy_rel_tol > 0.0:
            raise InvalidInputError(
                f"degeneracy_rel_tol must be positive, got {self.degeneracy_rel_tol}"
            )
        if self.angle_unit not in ("radians", "degrees"):
            raise InvalidInputError(f"unknown angle unit {self.angle_unit!r}")


DEFAULT_TOLERANCES = ToleranceConfig()


class Simplex:
    """An ordered k-simplex embedded in R^d, k <= d.

    Vertices are stored as the rows of a read-only float64 array of shape
    (k+1, d).  The vertex order is significant: facets, barycentric
    gradients and the product decomposition all refer to vertex indices.
    """

    __slots__ = ("_vertices",)

    def __init__(self, vertices) -> None:
        try:
            arr = np.array(vertices, dtype=float, copy=True)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"inconsistent vertex coordinates: {exc}") from exc
        if arr.ndim != 2:
            raise InvalidInputError(
                f"vertices must form a 2-d coordinate array, got ndim={arr.ndim}"
            )
        n_vertices, dim = arr.shape
        if n_vertices < 1 or dim < 1:
            raise InvalidInputError(f"empty simplex of shape {arr.shape}")
        if n_vertices - 1 > dim:
            raise InvalidInputError(
                f"{n_vertices} vertices cannot span a simplex in R^{dim} (k <= d required)"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("vertex coordinates must be finite")
        arr.setflags(write=False)
        self._vertices = arr

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def ambient_dim(self) -> int:
        return self._vertices.shape[1]

    @property
    def intrinsic_dim(self) -> int:
        return self._vertices.shape[0] - 1

    @property
    def vertex_count(self) -> int:
        return self._vertices.shape[0]

    def vertex(self, i: int) -> np.ndarray:
        return self._vertices[i]

    def edge_vectors(self) -> np.ndarray:
        """Edge vectors A_i - A_0 for i = 1..k, as rows of a (k, d) array."""
        return self._vertices[1:] - self._vertices[0]

    def diameter(self) -> float:
        """Largest pairwise vertex distance."""
        diff = self._vertices[:, None, :] - self._vertices[None, :, :]
        return float(np.sqrt((diff * diff).sum(axis=-1)).max())

    def permuted(self, order) -> "Simplex":
        """Simplex with vertices reordered by the given index sequence."""
        idx = list(order)
        if sorted(idx) != list(range(self.vertex_count)):
            raise InvalidInputError(f"{idx} is not a permutation of the vertex indices")
        return Simplex(self._vertices[idx])

    def __repr__(self) -> str:
        return f"Simplex(k={self.intrinsic_dim}, d={self.ambient_dim})"


@dataclass(frozen=True)
class Facet:
    """The (k-1)-subsimplex opposite one vertex, with its origin recorded.

    The facet inherits the parent's vertex order with the omitted vertex
    removed.
    """

    simplex: Simplex
    omitted_vertex_index: int


def _gram_root(s: Simplex) -> float:
    """sqrt(det G) of the edge Gram matrix; clipped at 0 for exact degeneracy."""
    edges = s.edge_vectors()
    gram = edges @ edges.T
    det = float(np.linalg.det(gram))
    return math.sqrt(det) if det > 0.0 else 0.0


def simplex_measure(s: Simplex) -> float:
    """k-dimensional measure of a k-simplex embedded in R^d.

    Computed as sqrt(det G) / k! where G is the Gram matrix of the edge
    vectors from vertex 0.  Exactly degenerate input yields 0 rather than
    an error; the result is always nonnegative.
    """
    k = s.intrinsic_dim
    if k == 0:
        return 1.0
    return _gram_root(s) / math.factorial(k)


def facet(s: Simplex, i: int) -> Facet:
    """The (k-1)-facet of ``s`` opposite vertex ``i``, order preserved."""
    k = s.intrinsic_dim
    if k < 1:
        raise InvalidInputError("a 0-simplex has no facets")
    if not 0 <= i <= k:
        raise InvalidInputError(f"facet index {i} out of range 0..{k}")
    kept = np.delete(s.vertices, i, axis=0)
    return Facet(Simplex(kept), i)


def is_degenerate(s: Simplex, cfg: ToleranceConfig | None = None) -> bool:
    """Scale-invariant degeneracy test.

    True iff sqrt(det G) <= degeneracy_rel_tol * (max edge length)^k.
    Deterministic; never raises.
    """
    cfg = cfg or DEFAULT_TOLERANCES
    k = s.intrinsic_dim
    if k == 0:
        return False
    return _gram_root(s) <= cfg.degeneracy_rel_tol * s.diameter() ** k


def orthonormal_frame(s: Simplex, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Orthonormal basis of the direction space of the affine hull of ``s``.

    Returns a (k, d) array whose rows span the same subspace as the edge
    vectors.  Uses pivoted modified Gram-Schmidt with one
    re-orthogonalization pass; pivoting picks the remaining edge with the
    largest residual norm, which keeps slivers from poisoning the frame.

    Raises:
        DegeneracyError: if ``s`` is degenerate at the configured tolerance.
    """
    if is_degenerate(s, cfg):
        raise DegeneracyError(f"cannot build a frame for degenerate {s!r}")
    k, d = s.intrinsic_dim, s.ambient_dim
    work = s.edge_vectors().copy()
    frame = np.zeros((k, d))
    for m in range(k):
        residual_norms = np.linalg.norm(work[m:], axis=1)
        pivot = m + int(np.argmax(residual_norms))
        if pivot != m:
            work[[m, pivot]] = work[[pivot, m]]
        v = work[m]
        for _ in range(2):
            v = v - frame[:m].T @ (frame[:m] @ v)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise DegeneracyError(f"edge vectors of {s!r} do not span {k} dimensions")
        frame[m] = v / norm
        if m + 1 < k:
            work[m + 1 :] -= np.outer(work[m + 1 :] @ frame[m], frame[m])
    return frame


def project_intrinsic(s: Simplex, cfg: ToleranceConfig | None = None) -> Simplex:
    """Express ``s`` in R^k coordinates of its own affine hull.

    The result is full-dimensional (intrinsic_dim == ambient_dim == k),
    has vertex 0 at the origin, and preserves all pairwise distances.
    """
    frame = orthonormal_frame(s, cfg)
    coords = (s.vertices - s.vertices[0]) @ frame.T
    return Simplex(coords)


def _barycentric_gradients(s: Simplex) -> np.ndarray:
    """Gradients of the barycentric coordinates of a full-dimensional simplex.

    Row i is the gradient of the i-th barycentric coordinate; it is
    orthogonal to facet F_i and points from the facet toward vertex A_i.
    """
    edges = s.edge_vectors()
    try:
        inv = np.linalg.inv(edges)
    except np.linalg.LinAlgError as exc:
        raise DegeneracyError(f"singular edge matrix for {s!r}") from exc
    grads = inv.T
    return np.vstack([-grads.sum(axis=0), grads])


def outward_unit_normals(s: Simplex, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """All k+1 outward unit facet normals of a full-dimensional simplex.

    Row i is the unit normal of facet F_i pointing away from vertex A_i.
    ``s`` must be full-dimensional in its intrinsic space; project
    subsimplices with :func:`project_intrinsic` first.
    """
    if s.intrinsic_dim != s.ambient_dim:
        raise InvalidInputError(
            f"normals need a full-dimensional simplex, got {s!r}; apply project_intrinsic"
        )
    if is_degenerate(s, cfg):
        raise DegeneracyError(f"normals are undefined for degenerate {s!r}")
    grads = _barycentric_gradients(s)
    norms = np.linalg.norm(grads, axis=1)
    if not np.all(norms > 0.0) or not np.all(np.isfinite(norms)):
        raise DegeneracyError(f"degenerate facet encountered in {s!r}")
    return -grads / norms[:, None]


def outward_unit_normal(s: Simplex, i: int, cfg: ToleranceConfig | None = None) -> np.ndarray:
    """Outward unit normal of the facet of ``s`` opposite vertex ``i``."""
    if not 0 <= i <= s.intrinsic_dim:
        raise InvalidInputError(f"vertex index {i} out of range 0..{s.intrinsic_dim}")
    return outward_unit_normals(s, cfg)[i]
