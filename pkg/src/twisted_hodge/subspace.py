"""Subspaces of Q(i)^N and maps induced on quotients.

A subspace is stored by the reduced row echelon form of its spanning
vectors (unit pivots, leftmost pivot first).  That form is unique, so two
subspaces are equal exactly when their stored rows are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from twisted_hodge.errors import ConstructionError, DimensionError, NotAChainMap
from twisted_hodge.field import GaussianRational
from twisted_hodge.linalg import ExactMatrix, gauss_jordan

__all__ = ["Subspace", "subspace_combine", "induced_quotient_map", "QuotientMap"]


class Subspace:
    __slots__ = ("ambient_dim", "rows", "pivots")

    def __init__(self, ambient_dim: int, rows: ExactMatrix, pivots: Sequence[int]):
        self.ambient_dim = ambient_dim
        self.rows = rows
        self.pivots = tuple(pivots)

    @classmethod
    def from_matrix_rows(cls, m: ExactMatrix) -> "Subspace":
        gj = gauss_jordan(m)
        return cls(m.cols, gj.rref(), gj.pivots)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence], ambient_dim: int) -> "Subspace":
        if not vectors:
            return cls.zero(ambient_dim)
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        return cls.from_matrix_rows(ExactMatrix.from_entries(vectors, ambient_dim))

    @classmethod
    def column_span(cls, m: ExactMatrix) -> "Subspace":
        """Span of the columns of ``m``."""
        if m.cols == 0:
            return cls.zero(m.rows)
        return cls.from_matrix_rows(m.transpose())

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ExactMatrix.zeros(0, ambient_dim), ())

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ExactMatrix.identity(ambient_dim), range(ambient_dim))

    @classmethod
    def kernel(cls, a: ExactMatrix) -> "Subspace":
        return cls.from_vectors(gauss_jordan(a).nullspace_vectors(), a.cols)

    @classmethod
    def image(cls, a: ExactMatrix) -> "Subspace":
        return cls.column_span(a)

    @property
    def dim(self) -> int:
        return self.rows.rows

    @property
    def basis(self) -> ExactMatrix:
        """Basis vectors as the columns of an ``ambient x dim`` matrix."""
        return self.rows.transpose()

    def vectors(self) -> list[list[GaussianRational]]:
        return self.rows.entries()

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.rows == other.rows

    def __hash__(self):
        return hash((self.ambient_dim, self.rows))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace.from_matrix_rows(self.rows.vstack(other.rows))

    def annihilator(self) -> "Subspace":
        """Vectors ``x`` with ``sum(u_i x_i) = 0`` for every ``u`` here (bilinear pairing)."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        return Subspace.kernel(self.rows)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        if self.dim == self.ambient_dim:
            return other
        if other.dim == other.ambient_dim:
            return self
        # U & V = ann(ann U + ann V)
        stacked = self.annihilator().rows.vstack(other.annihilator().rows)
        return Subspace.kernel(stacked)

    intersection = __and__

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        if self.dim == 0:
            return True
        if self.dim > other.dim:
            return False
        if other.dim == 0:
            return False
        return gauss_jordan(other.rows.vstack(self.rows)).rank == other.dim

    def __le__(self, other: "Subspace") -> bool:
        return self.is_subspace_of(other)

    def contains_vector(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length does not match ambient dimension")
        if not any(GaussianRational.coerce(x) for x in v):
            return True
        if self.dim == 0:
            return False
        extra = ExactMatrix.from_entries([list(v)], self.ambient_dim)
        return gauss_jordan(self.rows.vstack(extra)).rank == self.dim

    def mapped_by(self, a: ExactMatrix) -> "Subspace":
        """Image of this subspace under the linear map ``a``."""
        if a.cols != self.ambient_dim:
            raise DimensionError("map does not act on this ambient space")
        if self.dim == 0:
            return Subspace.zero(a.rows)
        return Subspace.column_span(a @ self.basis)

    def preimage(self, a: ExactMatrix) -> "Subspace":
        """``{x : a x in self}``."""
        if a.rows != self.ambient_dim:
            raise DimensionError("map does not land in this ambient space")
        if self.dim == self.ambient_dim:
            return Subspace.full(a.cols)
        return Subspace.kernel(self.annihilator().rows @ a)

    def complement_representatives(self, inner: "Subspace") -> list[list[GaussianRational]]:
        """Basis vectors of ``self`` that extend a basis of ``inner`` (assumed contained)."""
        chosen = inner
        out = []
        for v in self.vectors():
            if not chosen.contains_vector(v):
                out.append(v)
                chosen = chosen + Subspace.from_vectors([v], self.ambient_dim)
        return out


def subspace_combine(u: Subspace, v: Subspace, mode: str):
    """``sum``, ``intersection`` or ``contains``; the last answers ``u <= v``."""
    u._check(v)
    if mode == "sum":
        return u + v
    if mode == "intersection":
        return u & v
    if mode == "contains":
        return u.is_subspace_of(v)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class QuotientMap:
    rank: int
    injective: bool
    surjective: bool
    source_dim: int
    target_dim: int

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def induced_quotient_map(
    z1: Subspace, b1: Subspace, z2: Subspace, b2: Subspace, carrier: ExactMatrix | None = None
) -> QuotientMap:
    """Analyse the map ``Z1/B1 -> Z2/B2`` induced by ``carrier`` (identity if None)."""
    if carrier is None:
        if z1.ambient_dim != z2.ambient_dim:
            raise DimensionError("identity carrier needs equal ambient dimensions")
        carrier = ExactMatrix.identity(z1.ambient_dim)
    if not b1.is_subspace_of(z1):
        raise NotAChainMap("source boundaries are not contained in source cycles")
    if not b2.is_subspace_of(z2):
        raise NotAChainMap("target boundaries are not contained in target cycles")
    cz1 = z1.mapped_by(carrier)
    if not cz1.is_subspace_of(z2):
        raise NotAChainMap("carrier does not send cycles to cycles")
    if not b1.mapped_by(carrier).is_subspace_of(b2):
        raise NotAChainMap("carrier does not send boundaries to boundaries")
    image = cz1 + b2
    rank = image.dim - b2.dim
    source_dim = z1.dim - b1.dim
    target_dim = z2.dim - b2.dim
    injective = (z1 & b2.preimage(carrier)).is_subspace_of(b1)
    surjective = z2.is_subspace_of(image)
    # rank-nullity cross-check on the quotients
    if injective != (rank == source_dim) or surjective != (rank == target_dim):
        raise ConstructionError("induced map: rank disagrees with the injectivity/surjectivity tests")
    return QuotientMap(rank, injective, surjective, source_dim, target_dim)
