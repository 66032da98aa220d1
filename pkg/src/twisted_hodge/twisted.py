"""Twisted differentials built from a pair of Bott-Chern closed (1,0)-forms.

For ``theta1, theta2`` with ``del theta = delbar theta = 0``::

    del_tw    = del    + L(theta2)      + L(conj theta1)
    delbar_tw = delbar - L(conj theta2) + L(theta1)
    d_phi     = d + L(phi),   phi = theta1 + conj theta1 + theta2 - conj theta2

so that ``d_phi = del_tw + delbar_tw``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from twisted_hodge import forms as F
from twisted_hodge.complex import (
    FormBasis,
    LieComplexSpec,
    UntwistedOperators,
    _split_generator_differentials,
    assemble_untwisted,
    build_basis,
    d_of_form,
)
from twisted_hodge.errors import ConstructionError, NotBottChernClosed, ParseError
from twisted_hodge.field import GaussianRational
from twisted_hodge.operators import GradedOperator

__all__ = [
    "TwistPair",
    "TwistedComplex",
    "parse_twist",
    "validate_twist",
    "left_multiplication",
    "assemble_twisted",
    "twisted_complex",
    "leibniz_check",
    "LeibnizResult",
]


@dataclass(frozen=True)
class TwistPair:
    n: int
    theta1: tuple  # coefficients on mu1..mun
    theta2: tuple

    @staticmethod
    def _form(coeffs) -> F.Form:
        return F.clean({(g,): c for g, c in enumerate(coeffs)})

    @property
    def theta1_form(self) -> F.Form:
        return self._form(self.theta1)

    @property
    def theta2_form(self) -> F.Form:
        return self._form(self.theta2)

    @property
    def phi(self) -> F.Form:
        t1, t2 = self.theta1_form, self.theta2_form
        return F.add(t1, F.conjugate(t1, self.n), t2, F.scale(F.conjugate(t2, self.n), -1))

    @property
    def theta1_is_zero(self) -> bool:
        return not any(self.theta1)

    def is_zero(self) -> bool:
        return not any(self.theta1) and not any(self.theta2)

    def dual(self) -> "TwistPair":
        """The pair ``(-theta1, -theta2)`` whose twisted star-conjugates give the adjoints."""
        return TwistPair(self.n, tuple(-c for c in self.theta1), tuple(-c for c in self.theta2))

    def swapped_dual(self) -> "TwistPair":
        """The pair ``(-theta2, -theta1)``."""
        return TwistPair(self.n, tuple(-c for c in self.theta2), tuple(-c for c in self.theta1))

    def describe(self) -> dict:
        return {
            "theta1": F.format_form(self.theta1_form, self.n),
            "theta2": F.format_form(self.theta2_form, self.n),
            "phi": F.format_form(self.phi, self.n),
        }


def parse_twist(value, n: int) -> tuple:
    """Coefficient vector of a (1,0)-form from text (``"1/2*mu1 - i*mu2"``), a vector or a form."""
    if value is None:
        return tuple(GaussianRational(0) for _ in range(n))
    if isinstance(value, str):
        form = F.parse_form(value, n)
    elif isinstance(value, dict):
        form = F.clean(value)
    else:
        vec = tuple(GaussianRational.coerce(c) for c in value)
        if len(vec) != n:
            raise ParseError(f"twist vector has length {len(vec)}, expected {n}")
        return vec
    out = [GaussianRational(0)] * n
    for m, c in form.items():
        if len(m) != 1 or m[0] >= n:
            raise ParseError(f"twist {F.format_form(form, n)!r} is not an invariant (1,0)-form")
        out[m[0]] = c
    return tuple(out)


def validate_twist(spec: LieComplexSpec, theta1, theta2) -> TwistPair:
    n = spec.n
    t1, t2 = parse_twist(theta1, n), parse_twist(theta2, n)
    del_gen, delbar_gen = _split_generator_differentials(spec)
    for name, vec in (("theta1", t1), ("theta2", t2)):
        form = TwistPair._form(vec)
        for op_name, gens in (("del", del_gen), ("delbar", delbar_gen)):
            residual = d_of_form(form, gens)
            if residual:
                raise NotBottChernClosed(
                    f"{op_name} {name} = {F.format_form(residual, n)} is not zero",
                    residual=residual,
                )
    pair = TwistPair(n, t1, t2)
    if d_of_form(pair.phi, spec.generator_differentials):
        raise ConstructionError("phi is not d-closed although both thetas are")
    return pair


def left_multiplication(basis: FormBasis, alpha: F.Form) -> GradedOperator:
    """``x -> alpha ^ x`` for a homogeneous form ``alpha``."""
    r = F.form_degree(alpha)
    if r is None:
        return GradedOperator.zero(basis.dims, 1)
    return basis.operator_from_action(lambda m: F.wedge(alpha, {m: GaussianRational(1)}), r)


@dataclass
class TwistedComplex:
    spec: LieComplexSpec
    basis: FormBasis
    untwisted: UntwistedOperators
    twist: TwistPair
    partial_tw: GradedOperator
    partial_bar_tw: GradedOperator
    d_phi: GradedOperator
    L_theta1: GradedOperator
    L_theta2: GradedOperator
    L_phi: GradedOperator

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def dims(self) -> tuple:
        return self.basis.dims

    @property
    def partial_partial_bar(self) -> GradedOperator:
        return self.partial_tw @ self.partial_bar_tw


def assemble_twisted(
    spec: LieComplexSpec, basis: FormBasis, twist: TwistPair, untwisted: UntwistedOperators | None = None
) -> TwistedComplex:
    ops = untwisted or assemble_untwisted(spec, basis)
    n = spec.n
    t1, t2 = twist.theta1_form, twist.theta2_form
    L1 = left_multiplication(basis, t1)
    L2 = left_multiplication(basis, t2)
    L1bar = left_multiplication(basis, F.conjugate(t1, n))
    L2bar = left_multiplication(basis, F.conjugate(t2, n))
    Lphi = left_multiplication(basis, twist.phi)
    if twist.is_zero():
        del_tw, delbar_tw, d_phi = ops.partial, ops.partial_bar, ops.d
    else:
        del_tw = ops.partial + L2 + L1bar
        delbar_tw = ops.partial_bar - L2bar + L1
        d_phi = ops.d + Lphi
    if not d_phi == del_tw + delbar_tw:
        raise ConstructionError("d_phi != del_tw + delbar_tw")
    if not (del_tw @ del_tw).is_zero():
        raise ConstructionError("del_tw^2 != 0")
    if not (delbar_tw @ delbar_tw).is_zero():
        raise ConstructionError("delbar_tw^2 != 0")
    if not del_tw.anticommutator(delbar_tw).is_zero():
        raise ConstructionError("del_tw delbar_tw + delbar_tw del_tw != 0")
    if not (d_phi @ d_phi).is_zero():
        raise ConstructionError("d_phi^2 != 0")
    return TwistedComplex(spec, basis, ops, twist, del_tw, delbar_tw, d_phi, L1, L2, Lphi)


def twisted_complex(spec: LieComplexSpec, theta1=None, theta2=None, *, allow_large=False) -> TwistedComplex:
    """Validate and assemble in one step."""
    basis = build_basis(spec, allow_large=allow_large)
    twist = validate_twist(spec, theta1, theta2)
    return assemble_twisted(spec, basis, twist)


@dataclass
class LeibnizResult:
    ok: bool
    checked: int
    failures: list  # (operator name, monomial)


def leibniz_check(tc: TwistedComplex, alphas: Sequence[F.Form] | None = None) -> LeibnizResult:
    """Check ``[D, L_a] = L_{D0 a}`` for ``D`` in (del_tw, delbar_tw) with graded commutator sign.

    ``D0`` is the untwisted part; by default every basis monomial is tried.
    """
    if alphas is None:
        alphas = [{m: GaussianRational(1)} for mons in tc.basis.by_degree for m in mons]
    del_gen, delbar_gen = _split_generator_differentials(tc.spec)
    failures = []
    for alpha in alphas:
        r = F.form_degree(alpha) or 0
        La = left_multiplication(tc.basis, alpha)
        for name, D, gens in (("del", tc.partial_tw, del_gen), ("delbar", tc.partial_bar_tw, delbar_gen)):
            lhs = D.commutator(La, graded_sign=(-1) ** r)
            rhs = left_multiplication(tc.basis, d_of_form(alpha, gens)) if r < tc.basis.N else None
            if rhs is None or F.form_degree(d_of_form(alpha, gens)) is None:
                ok = lhs.is_zero()
            else:
                ok = lhs == rhs
            if not ok:
                failures.append((name, tc.basis.format(alpha)))
    return LeibnizResult(not failures, len(alphas), failures)


def conjugation_symmetry_holds(tc_a: TwistedComplex, tc_b: TwistedComplex) -> bool:
    """``conj o del_tw(a) == delbar_tw(b) o conj`` for the two supplied complexes."""
    c = tc_a.untwisted.conjugation
    return (c @ tc_a.partial_tw) == (tc_b.partial_bar_tw @ c)


def conjugate_twist(twist: TwistPair) -> TwistPair:
    """The pair ``(theta1, -theta2)``: conjugation carries ``del_tw`` to its ``delbar_tw``."""
    return TwistPair(twist.n, twist.theta1, tuple(-c for c in twist.theta2))
