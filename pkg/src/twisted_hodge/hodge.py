"""Invariant Hermitian metrics, the anti-linear Hodge star and twisted Hodge theory.

Conventions (all exact):

* the metric is the Gram matrix ``h[a][b] = <mu_a, mu_b>`` of the (1,0)
  coframe, extended to ``<mubar_a, mubar_b> = conj h[a][b]`` and to forms by
  determinants of minors;
* ``(x, y) = x^T G conj(y)`` is linear in the first slot;
* ``omega = i * sum g[j][k] mu_j ^ mubar_k`` with ``g`` the metric on vectors,
  normalised so that ``vol = omega^n / n!`` has unit length;
* ``x ^ starbar(y) = (x, y) vol`` defines the conjugate-linear star.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import factorial

from twisted_hodge import forms as F
from twisted_hodge.complex import FormBasis, LieComplexSpec, d_of_form
from twisted_hodge.errors import (
    AdjointMismatch,
    BadMetric,
    DualityViolation,
    HodgeIsoViolation,
    KahlerIdentityViolation,
    NotKahler,
    ParseError,
)
from twisted_hodge.field import I, GaussianRational, parse_scalar
from twisted_hodge.linalg import ExactMatrix, gauss_jordan
from twisted_hodge.operators import GradedOperator
from twisted_hodge.twisted import TwistedComplex, assemble_twisted, left_multiplication

__all__ = [
    "MetricSpec",
    "parse_metric",
    "build_metric",
    "hodge_star",
    "gram_adjoint",
    "Adjoints",
    "adjoints",
    "LaplacianSet",
    "laplacians",
    "harmonic_spaces",
    "star_duality_check",
    "kahler_identity_suite",
    "inner",
]


# ---------------------------------------------------------------------------
# metric


def parse_metric(value, n: int) -> ExactMatrix | None:
    """Accept ``None``, ``"identity"``, ``"diag:a,b,c"``, JSON text or a nested list."""
    if value is None or (isinstance(value, str) and value.strip().lower() in ("", "identity", "id")):
        return None
    if isinstance(value, str):
        text = value.strip()
        if text.startswith("diag:"):
            entries = [parse_scalar(x) for x in text[5:].split(",")]
            if len(entries) != n:
                raise ParseError(f"diagonal metric needs {n} entries, got {len(entries)}")
            rows = [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]
            return ExactMatrix.from_entries(rows, n)
        try:
            value = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"metric is neither 'identity', 'diag:...' nor JSON: {exc}") from exc
    try:
        rows = [[x if isinstance(x, GaussianRational) else parse_scalar(str(x)) for x in row] for row in value]
    except TypeError:
        raise ParseError("metric must be an n x n list of coefficients") from None
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ParseError(f"metric must be {n}x{n}")
    return ExactMatrix.from_entries(rows, n)


@dataclass
class MetricSpec:
    n: int
    basis: FormBasis
    gram: ExactMatrix  # n x n, on the (1,0) coframe
    grams: tuple  # per-degree Gram matrices on monomials
    gram_inverses: tuple
    omega: F.Form
    d_omega: F.Form
    vol: F.Form
    kahler: bool

    @property
    def is_identity(self) -> bool:
        return self.gram == ExactMatrix.identity(self.n)

    def describe(self) -> list:
        return [[str(self.gram[i, j]) for j in range(self.n)] for i in range(self.n)]


def _check_metric(h: ExactMatrix) -> None:
    n = h.rows
    if h.cols != n:
        raise BadMetric("metric must be square")
    if h != h.H:
        raise BadMetric("metric is not Hermitian")
    for k in range(1, n + 1):
        minor = h.submatrix(range(k), range(k)).determinant()
        if minor.im != 0 or minor.re <= 0:
            raise BadMetric(f"leading principal minor of order {k} is {minor}, not positive")


def _form_gram(basis: FormBasis, g1: ExactMatrix, k: int) -> ExactMatrix:
    mons = basis.by_degree[k]
    if k == 0:
        return ExactMatrix.identity(1)
    n = basis.n
    rows = []
    for a in mons:
        row = []
        pa = sum(1 for g in a if g < n)
        for b in mons:
            if pa != sum(1 for g in b if g < n):
                row.append(0)
            else:
                row.append(g1.submatrix(a, b).determinant())
        rows.append(row)
    return ExactMatrix.from_entries(rows, len(mons))


def build_metric(spec: LieComplexSpec, basis: FormBasis, gram=None) -> MetricSpec:
    """Metric from ``gram`` (matrix, text, list) or the one stored in ``spec`` (default identity)."""
    n = spec.n
    if gram is None and spec.metric is not None:
        gram = [list(r) for r in spec.metric]
    h = gram if isinstance(gram, ExactMatrix) else parse_metric(gram, n)
    if h is None:
        h = ExactMatrix.identity(n)
    if h.shape != (n, n):
        raise BadMetric(f"metric must be {n}x{n}")
    _check_metric(h)
    zero = GaussianRational(0)
    g1 = ExactMatrix.from_entries(
        [[h[i, j] if i < n and j < n else (h[i - n, j - n].conj() if i >= n and j >= n else zero) for j in range(2 * n)] for i in range(2 * n)],
        2 * n,
    )
    grams = tuple(_form_gram(basis, g1, k) for k in range(basis.N + 1))
    inverses = tuple(G.inverse() for G in grams)
    # metric on (1,0)-vectors is the inverse of the coframe Gram
    g = h.inverse().T
    omega = F.clean({(j, n + k): I * g[j, k] for j in range(n) for k in range(n)})
    top: F.Form = {(): GaussianRational(1)}
    for _ in range(n):
        top = F.wedge(top, omega)
    vol = F.scale(top, GaussianRational(1) / factorial(n))
    d_omega = d_of_form(omega, spec.generator_differentials)
    metric = MetricSpec(n, basis, h, grams, inverses, omega, d_omega, vol, not d_omega)
    (v,) = vol.values()
    if inner(metric, [v], [v], basis.N) != GaussianRational(1):
        raise BadMetric("volume form is not of unit length")
    return metric


def inner(metric: MetricSpec, x, y, k: int) -> GaussianRational:
    """``(x, y) = x^T G_k conj(y)``."""
    Gy = metric.grams[k].apply([GaussianRational.coerce(c).conj() for c in y])
    total = GaussianRational(0)
    for a, b in zip(x, Gy):
        total = total + GaussianRational.coerce(a) * b
    return total


# ---------------------------------------------------------------------------
# star and adjoints


def hodge_star(metric: MetricSpec) -> GradedOperator:
    basis = metric.basis
    N = basis.N
    ((top, v),) = metric.vol.items()
    blocks = {}
    for k in range(N + 1):
        left, right = basis.by_degree[k], basis.by_degree[N - k]
        # wedge pairing e_a ^ f_c = P[a][c] vol
        P = []
        for a in left:
            row = []
            for c in right:
                s, m = F.wedge_monomials(a, c)
                row.append(GaussianRational(s) / v if s else 0)
            P.append(row)
        Pm = ExactMatrix.from_entries(P, len(right))
        blocks[k] = Pm.inverse() @ metric.grams[k]
    return GradedOperator(basis.dims, blocks, shift=N, sign=-1, antilinear=True)


def gram_adjoint(op: GradedOperator, metric: MetricSpec) -> GradedOperator:
    """Formal adjoint of a linear, constant-shift operator."""
    if op.antilinear or op.degree_shift is None:
        raise ValueError("gram adjoint is implemented for linear degree-shifting operators")
    s = op.degree_shift
    G, Ginv = metric.grams, metric.gram_inverses
    blocks = {}
    for k in op.degrees():
        t = op.target(k)
        A = op.block(k)
        blocks[t] = Ginv[k].conj() @ A.H @ G[t].conj()
    return GradedOperator(op.dims, blocks, shift=-s)


def _parity(dims) -> GradedOperator:
    return GradedOperator(dims, {k: ExactMatrix.identity(d).scale((-1) ** k) for k, d in enumerate(dims)})


@dataclass
class Adjoints:
    star: GradedOperator
    d_phi: GradedOperator
    partial: GradedOperator
    partial_bar: GradedOperator
    Lambda_phi: GradedOperator
    Lambda_omega: GradedOperator
    L_omega: GradedOperator


def adjoints(tc: TwistedComplex, metric: MetricSpec, star: GradedOperator | None = None) -> Adjoints:
    """Gram adjoints, each re-derived from the star and required to agree exactly.

    Star formulas: ``d_phi* = -S d_{-phi} S``, ``del_tw* = -S del_(-t1,-t2) S``
    (likewise for delbar), ``Lambda_phi = S L_phi S`` and
    ``Lambda_omega = (-1)^k S L_omega S`` on degree ``k``.
    """
    S = star if star is not None else hodge_star(metric)
    dual = assemble_twisted(tc.spec, tc.basis, tc.twist.dual(), tc.untwisted)
    L_omega = left_multiplication(tc.basis, metric.omega)
    pairs = {
        "d_phi": (tc.d_phi, -(S @ dual.d_phi @ S)),
        "partial": (tc.partial_tw, -(S @ dual.partial_tw @ S)),
        "partial_bar": (tc.partial_bar_tw, -(S @ dual.partial_bar_tw @ S)),
        "Lambda_phi": (tc.L_phi, S @ tc.L_phi @ S),
        "Lambda_omega": (L_omega, _parity(tc.dims) @ S @ L_omega @ S),
    }
    out = {}
    for name, (op, via_star) in pairs.items():
        via_gram = gram_adjoint(op, metric)
        if via_gram != via_star:
            raise AdjointMismatch(f"{name}: Gram adjoint and star formula disagree")
        out[name] = via_gram
    return Adjoints(S, L_omega=L_omega, **out)


# ---------------------------------------------------------------------------
# Laplacians


@dataclass
class LaplacianSet:
    delta_dphi: GradedOperator
    delta_del: GradedOperator
    delta_delbar: GradedOperator
    delta_BC: GradedOperator
    delta_A: GradedOperator

    def by_theory(self) -> dict:
        return {
            "dR": self.delta_dphi,
            "del": self.delta_del,
            "delbar": self.delta_delbar,
            "BC": self.delta_BC,
            "A": self.delta_A,
        }


def laplacians(tc: TwistedComplex, adj: Adjoints, metric: MetricSpec | None = None) -> LaplacianSet:
    """The five Laplacians, term by term as displayed; self-adjointness and PSD checked if ``metric`` is given."""
    d, ds = tc.d_phi, adj.d_phi
    p, ps = tc.partial_tw, adj.partial
    q, qs = tc.partial_bar_tw, adj.partial_bar
    pq = p @ q
    pq_s = qs @ ps  # (del delbar)* = delbar* del*
    qs_p = qs @ p
    qs_p_s = ps @ q  # (delbar* del)* = del* delbar
    q_ps = q @ ps
    q_ps_s = p @ qs  # (delbar del*)* = del delbar*
    lap = LaplacianSet(
        delta_dphi=d @ ds + ds @ d,
        delta_del=p @ ps + ps @ p,
        delta_delbar=q @ qs + qs @ q,
        delta_BC=pq @ pq_s + pq_s @ pq + qs_p @ qs_p_s + qs_p_s @ qs_p + qs @ q + ps @ p,
        delta_A=p @ ps + q @ qs + pq_s @ pq + pq @ pq_s + q_ps_s @ q_ps + q_ps @ q_ps_s,
    )
    if metric is not None:
        for name, op in lap.by_theory().items():
            _check_self_adjoint_psd(name, op, metric)
    return lap


def _check_self_adjoint_psd(name: str, op: GradedOperator, metric: MetricSpec) -> None:
    if gram_adjoint(op, metric) != op:
        raise HodgeIsoViolation(f"Laplacian {name} is not self-adjoint")
    for k in op.degrees():
        # (Delta e_i, e_i) = (Delta^T G)_ii
        M = op.block(k).T @ metric.grams[k]
        for i in range(M.rows):
            v = M[i, i]
            if v.im != 0 or v.re < 0:
                raise HodgeIsoViolation(f"Laplacian {name} is not positive semidefinite in degree {k}")


def harmonic_spaces(lap: LaplacianSet, expected: dict | None = None) -> dict:
    """``dim ker Delta`` per theory and degree; compared with ``expected`` cohomology dims if given."""
    out = {}
    for name, op in lap.by_theory().items():
        out[name] = [op.dims[k] - gauss_jordan(op.block(k)).rank for k in range(len(op.dims))]
    if expected is not None:
        for name, dims in out.items():
            if list(expected[name]) != dims:
                raise HodgeIsoViolation(f"{name}: harmonic dims {dims} != cohomology dims {list(expected[name])}")
    return out


# ---------------------------------------------------------------------------
# star duality


@dataclass
class DualityReport:
    partner: str  # description of the partner twist
    identities: dict  # name -> bool
    dims: dict  # name -> bool (h(k) == h'(2n-k) for all k)

    @property
    def ok(self) -> bool:
        return all(self.identities.values()) and all(self.dims.values())


def _reversed_equal(a, b) -> bool:
    return list(a) == list(reversed(b))


def star_duality_check(tc: TwistedComplex, metric: MetricSpec, partner: str = "dual", *, strict: bool = True) -> DualityReport:
    """Intertwining of the star with the Laplacians of a partner twist.

    ``partner="dual"`` uses ``(-theta1, -theta2)``, for which ``d_phi`` becomes
    ``d_{-phi}`` and the star identities are theorems; ``partner="swapped"``
    uses ``(-theta2, -theta1)``.  With ``strict`` a failure in the dual case
    raises :class:`DualityViolation`.
    """
    from twisted_hodge.cohomology import five_cohomologies

    twist = tc.twist.dual() if partner == "dual" else tc.twist.swapped_dual()
    other = assemble_twisted(tc.spec, tc.basis, twist, tc.untwisted)
    S = hodge_star(metric)
    lap = laplacians(tc, adjoints(tc, metric, S))
    lap2 = laplacians(other, adjoints(other, metric, S))
    # d_{-phi} is always the dual pair
    minus_phi = other if partner == "dual" else assemble_twisted(tc.spec, tc.basis, tc.twist.dual(), tc.untwisted)
    lap_mphi = lap2 if partner == "dual" else laplacians(minus_phi, adjoints(minus_phi, metric, S))
    identities = {
        "star Delta_dphi = Delta_d(-phi) star": S @ lap.delta_dphi == lap_mphi.delta_dphi @ S,
        "star Delta_del = Delta_del' star": S @ lap.delta_del == lap2.delta_del @ S,
        "star Delta_delbar = Delta_delbar' star": S @ lap.delta_delbar == lap2.delta_delbar @ S,
        "star Delta_BC = Delta_A' star": S @ lap.delta_BC == lap2.delta_A @ S,
    }
    h = five_cohomologies(tc).all_dims()
    h2 = five_cohomologies(other).all_dims()
    hm = h2 if partner == "dual" else five_cohomologies(minus_phi).all_dims()
    dims = {
        "h_dR(k; phi) = h_dR(2n-k; -phi)": _reversed_equal(h["dR"], hm["dR"]),
        "h_del(k) = h_del'(2n-k)": _reversed_equal(h["del"], h2["del"]),
        "h_delbar(k) = h_delbar'(2n-k)": _reversed_equal(h["delbar"], h2["delbar"]),
        "h_BC(k) = h_A'(2n-k)": _reversed_equal(h["BC"], h2["A"]),
    }
    report = DualityReport(F.format_form(twist.theta1_form, tc.n) + " ; " + F.format_form(twist.theta2_form, tc.n), identities, dims)
    if strict and partner == "dual" and not report.ok:
        failed = [k for k, v in {**identities, **dims}.items() if not v]
        raise DualityViolation(f"star duality fails: {failed}")
    return report


# ---------------------------------------------------------------------------
# Kaehler identities


@dataclass
class KahlerReport:
    checks: dict  # name -> bool

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def kahler_identity_suite(tc: TwistedComplex, metric: MetricSpec, *, strict: bool = True) -> KahlerReport:
    if not metric.kahler:
        raise NotKahler(f"d omega = {F.format_form(metric.d_omega, tc.n)} is not zero")
    from twisted_hodge.cohomology import five_cohomologies

    adj = adjoints(tc, metric)
    lap = laplacians(tc, adj, metric)
    p, q = tc.partial_tw, tc.partial_bar_tw
    ps, qs, Lw = adj.partial, adj.partial_bar, adj.Lambda_omega
    two = GaussianRational(2)
    sq = lap.delta_delbar @ lap.delta_delbar
    checks = {
        "[Lambda, del] = i delbar*": Lw @ p - p @ Lw == qs.scale(I),
        "[Lambda, delbar] = -i del*": Lw @ q - q @ Lw == ps.scale(-I),
        "[del, delbar*] = 0": p.anticommutator(qs).is_zero(),
        "[delbar, del*] = 0": q.anticommutator(ps).is_zero(),
        "Delta_dphi = 2 Delta_del": lap.delta_dphi == lap.delta_del.scale(two),
        "Delta_dphi = 2 Delta_delbar": lap.delta_dphi == lap.delta_delbar.scale(two),
        "Delta_BC = Delta_delbar^2 + del* del + delbar* delbar": lap.delta_BC == sq + ps @ p + qs @ q,
        "Delta_A = Delta_delbar^2 + del del* + delbar delbar*": lap.delta_A == sq + p @ ps + q @ qs,
    }
    data = five_cohomologies(tc)
    bc, a = data.theories["BC"], data.theories["A"]
    checks["ker del cap ker delbar cap (im del + im delbar) = im del delbar"] = all(
        (bc.cycles[k] & a.boundaries[k]) == bc.boundaries[k] for k in range(len(tc.dims))
    )
    report = KahlerReport(checks)
    if strict and not report.ok:
        failed = [k for k, v in checks.items() if not v]
        raise KahlerIdentityViolation(f"Kaehler identities fail: {failed}")
    return report
