"""Degree-shifting linear and antilinear operators on a graded space.

An operator keeps one matrix per source degree ``k`` mapping degree-``k``
coordinates to coordinates in degree ``sign*k + offset``.  Ordinary
differentials have ``sign=+1``; the Hodge star has ``sign=-1, offset=2n``.

For an antilinear operator ``A`` with matrices ``M``, ``A(x) = M conj(x)``.
Composition therefore follows ``(A o B).block = M_A @ sigma(M_B)`` where sigma
is entrywise conjugation when ``A`` is antilinear, and linearity composes as
parity.
"""

from __future__ import annotations

from typing import Sequence

from twisted_hodge.errors import DimensionError
from twisted_hodge.field import GaussianRational
from twisted_hodge.linalg import ExactMatrix

__all__ = ["GradedOperator"]


class GradedOperator:
    __slots__ = ("dims", "sign", "offset", "antilinear", "_blocks")

    def __init__(
        self,
        dims: Sequence[int],
        blocks: dict[int, ExactMatrix],
        *,
        shift: int = 0,
        sign: int = 1,
        antilinear: bool = False,
    ):
        self.dims = tuple(dims)
        self.sign = sign
        self.offset = shift
        self.antilinear = antilinear
        table = [None] * len(self.dims)
        for k, m in blocks.items():
            t = self.target(k) if 0 <= k < len(self.dims) else None
            if t is None:
                if not m.is_zero():
                    raise DimensionError(f"block at degree {k} maps outside the complex")
                continue
            if m.shape != (self.dims[t], self.dims[k]):
                raise DimensionError(
                    f"block at degree {k} has shape {m.shape}, expected {(self.dims[t], self.dims[k])}"
                )
            table[k] = m
        self._blocks = tuple(table)

    @classmethod
    def _raw(cls, dims, table, sign, offset, antilinear):
        op = object.__new__(cls)
        op.dims, op._blocks, op.sign, op.offset, op.antilinear = dims, table, sign, offset, antilinear
        return op

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "GradedOperator":
        dims = tuple(dims)
        return cls._raw(dims, tuple(ExactMatrix.identity(d) for d in dims), 1, 0, False)

    @classmethod
    def zero(cls, dims: Sequence[int], shift: int = 0, sign: int = 1, antilinear=False) -> "GradedOperator":
        return cls._raw(tuple(dims), (None,) * len(dims), sign, shift, antilinear)

    @property
    def degree_shift(self) -> int | None:
        """Constant degree shift, or ``None`` for a reflecting operator such as the star."""
        return self.offset if self.sign == 1 else None

    @property
    def linearity(self) -> str:
        return "antilinear" if self.antilinear else "linear"

    def target(self, k: int) -> int | None:
        t = self.sign * k + self.offset
        return t if 0 <= t < len(self.dims) else None

    def block(self, k: int) -> ExactMatrix | None:
        """Matrix at source degree ``k`` (explicit zeros if unset); ``None`` if the target is out of range."""
        if not 0 <= k < len(self.dims):
            return None
        t = self.target(k)
        if t is None:
            return None
        m = self._blocks[k]
        return m if m is not None else ExactMatrix.zeros(self.dims[t], self.dims[k])

    def degrees(self):
        return [k for k in range(len(self.dims)) if self.target(k) is not None]

    def _same_kind(self, other: "GradedOperator"):
        if (self.dims, self.sign, self.offset, self.antilinear) != (
            other.dims,
            other.sign,
            other.offset,
            other.antilinear,
        ):
            raise DimensionError("operators differ in grading or linearity")

    # algebra
    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        self._same_kind(other)
        table = []
        for a, b in zip(self._blocks, other._blocks):
            table.append(b if a is None else a if b is None else a + b)
        return GradedOperator._raw(self.dims, tuple(table), self.sign, self.offset, self.antilinear)

    def __neg__(self) -> "GradedOperator":
        table = tuple(None if a is None else -a for a in self._blocks)
        return GradedOperator._raw(self.dims, table, self.sign, self.offset, self.antilinear)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + (-other)

    def scale(self, c) -> "GradedOperator":
        """``c * A``: multiply outputs by ``c`` (valid for both linearities)."""
        c = GaussianRational.coerce(c)
        table = tuple(None if a is None else a.scale(c) for a in self._blocks)
        return GradedOperator._raw(self.dims, table, self.sign, self.offset, self.antilinear)

    def __rmul__(self, c):
        return self.scale(c)

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        """Composition ``self o other``."""
        if self.dims != other.dims:
            raise DimensionError("operators act on different graded spaces")
        sign = self.sign * other.sign
        offset = self.sign * other.offset + self.offset
        table = [None] * len(self.dims)
        for k in range(len(self.dims)):
            t = other.target(k)
            if t is None:
                continue
            b = other._blocks[k]
            a = self._blocks[t] if self.target(t) is not None else None
            if a is None or b is None:
                continue
            table[k] = a @ (b.conj() if self.antilinear else b)
        return GradedOperator._raw(self.dims, tuple(table), sign, offset, self.antilinear != other.antilinear)

    def commutator(self, other: "GradedOperator", graded_sign: int = 1) -> "GradedOperator":
        """``self o other - graded_sign * other o self``."""
        rhs = other @ self
        return self @ other - (rhs if graded_sign == 1 else -rhs)

    def anticommutator(self, other: "GradedOperator") -> "GradedOperator":
        return self @ other + other @ self

    def conj(self) -> "GradedOperator":
        """Entrywise conjugate of every block (``sigma o A o sigma``)."""
        table = tuple(None if a is None else a.conj() for a in self._blocks)
        return GradedOperator._raw(self.dims, table, self.sign, self.offset, self.antilinear)

    def is_zero(self) -> bool:
        return all(a is None or a.is_zero() for a in self._blocks)

    def __eq__(self, other):
        if not isinstance(other, GradedOperator):
            return NotImplemented
        if (self.dims, self.antilinear) != (other.dims, other.antilinear):
            return False
        if (self.sign, self.offset) != (other.sign, other.offset):
            return self.is_zero() and other.is_zero()
        for a, b in zip(self._blocks, other._blocks):
            if a is None and b is None:
                continue
            if a is None or b is None:
                if not (a if a is not None else b).is_zero():
                    return False
            elif a != b:
                return False
        return True

    __hash__ = None

    def apply(self, k: int, vector: Sequence) -> list[GaussianRational]:
        m = self.block(k)
        if m is None:
            return []
        vec = [GaussianRational.coerce(x) for x in vector]
        if self.antilinear:
            vec = [x.conj() for x in vec]
        return m.apply(vec)

    def __repr__(self):
        kind = f"shift={self.offset}" if self.sign == 1 else f"k->{self.offset}-k"
        return f"GradedOperator({kind}, {self.linearity}, dims={self.dims})"
