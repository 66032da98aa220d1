"""The bigraded exterior complex of a Lie algebra with complex structure.

A model is given by the differentials of the (1,0) coframe ``mu1..mun``::

    d mu^k = sum_{i<j} A^k_ij mu^i ^ mu^j  +  sum_{i,j} B^k_ij mu^i ^ mubar^j

(``anti`` terms in ``mubar^i ^ mubar^j`` are accepted by the parser only to be
rejected as non-integrable).  The differentials of ``mubar^k`` are the
conjugates, and everything else follows from the graded Leibniz rule.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Any, Mapping

from twisted_hodge import forms as F
from twisted_hodge.errors import ConstructionError, NotALieAlgebra, NotIntegrable, ParseError, SizeGuard
from twisted_hodge.field import GaussianRational, format_scalar, parse_scalar
from twisted_hodge.linalg import ExactMatrix
from twisted_hodge.operators import GradedOperator

__all__ = [
    "StructureTerm",
    "LieComplexSpec",
    "FormBasis",
    "UntwistedOperators",
    "parse_and_validate",
    "build_basis",
    "assemble_untwisted",
    "MAX_N",
]

MAX_N = 5
_KINDS = ("holo", "mixed", "anti")


@dataclass(frozen=True)
class StructureTerm:
    kind: str  # holo | mixed | anti
    i: int  # 1-based
    j: int
    coeff: GaussianRational


@dataclass(frozen=True)
class LieComplexSpec:
    name: str
    n: int
    structure: tuple  # structure[k-1] = tuple of StructureTerm for d mu^k
    metric: tuple | None = None  # optional n x n gram of GaussianRational

    @cached_property
    def generator_differentials(self) -> tuple:
        """``d`` of each of the ``2n`` generators as a form."""
        n = self.n
        holo = []
        for terms in self.structure:
            f: F.Form = {}
            for t in terms:
                a, b = t.i - 1, t.j - 1
                if t.kind == "mixed":
                    b += n
                elif t.kind == "anti":
                    a += n
                    b += n
                s, m = F.sort_sign((a, b))
                if s == 0:
                    continue
                f = F.add(f, {m: t.coeff if s > 0 else -t.coeff})
            holo.append(f)
        anti = [F.conjugate(f, n) for f in holo]
        return tuple(holo + anti)

    def is_abelian(self) -> bool:
        return not any(self.generator_differentials)

    def to_document(self) -> dict:
        doc = {
            "name": self.name,
            "n": self.n,
            "d": [
                {
                    "target": k + 1,
                    "terms": [
                        {"coeff": format_scalar(t.coeff), "kind": t.kind, "i": t.i, "j": t.j}
                        for t in terms
                    ],
                }
                for k, terms in enumerate(self.structure)
                if terms
            ],
        }
        if self.metric is not None:
            doc["metric"] = [[format_scalar(x) for x in row] for row in self.metric]
        return doc


def _coerce_doc(doc) -> Mapping[str, Any]:
    if isinstance(doc, Mapping):
        return doc
    if isinstance(doc, (str, bytes)):
        try:
            loaded = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"model document is not valid JSON: {exc}") from exc
        if not isinstance(loaded, Mapping):
            raise ParseError("model document must be a JSON object")
        return loaded
    raise ParseError("model document must be a mapping or JSON text")


def _parse_coeff(raw) -> GaussianRational:
    if isinstance(raw, bool):
        raise ParseError(f"malformed coefficient {raw!r}")
    if isinstance(raw, int):
        return GaussianRational(raw)
    if isinstance(raw, str):
        return parse_scalar(raw)
    raise ParseError(f"malformed coefficient {raw!r}")


def parse_and_validate(doc, *, allow_large: bool = False) -> LieComplexSpec:
    """Parse a model document and check integrability and ``d^2 = 0``."""
    doc = _coerce_doc(doc)
    try:
        name = str(doc.get("name", "unnamed"))
        n = doc["n"]
    except KeyError as exc:
        raise ParseError("model document needs an integer 'n'") from exc
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"'n' must be a positive integer, got {n!r}")
    if n > MAX_N and not allow_large:
        raise SizeGuard(f"n = {n} exceeds the size guard {MAX_N}; pass allow_large to override")
    per_target: list[list[StructureTerm]] = [[] for _ in range(n)]
    for entry in doc.get("d", []) or []:
        try:
            target = entry["target"]
            raw_terms = entry.get("terms", [])
        except (KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"malformed differential entry {entry!r}") from exc
        if not isinstance(target, int) or not 1 <= target <= n:
            raise ParseError(f"target {target!r} outside 1..{n}")
        for t in raw_terms:
            try:
                kind, i, j = t["kind"], t["i"], t["j"]
                coeff = _parse_coeff(t["coeff"])
            except (KeyError, TypeError) as exc:
                raise ParseError(f"malformed term {t!r}") from exc
            if kind not in _KINDS:
                raise ParseError(f"term kind must be one of {_KINDS}, got {kind!r}")
            if not all(isinstance(x, int) and 1 <= x <= n for x in (i, j)):
                raise ParseError(f"term indices ({i}, {j}) outside 1..{n}")
            if kind != "mixed" and i == j:
                raise ParseError(f"{kind} term with i = j = {i} is identically zero")
            if kind != "mixed" and i > j:
                i, j, coeff = j, i, -coeff
            if coeff:
                per_target[target - 1].append(StructureTerm(kind, i, j, coeff))
    for k, terms in enumerate(per_target):
        if any(t.kind == "anti" for t in terms):
            raise NotIntegrable(
                f"d mu{k + 1} has a (0,2) component; the complex structure is not integrable"
            )
    metric = None
    if doc.get("metric") is not None:
        raw = doc["metric"]
        if not (isinstance(raw, list) and len(raw) == n and all(isinstance(r, list) and len(r) == n for r in raw)):
            raise ParseError(f"metric must be an {n}x{n} list of coefficients")
        metric = tuple(tuple(_parse_coeff(x) for x in row) for row in raw)
    spec = LieComplexSpec(name, n, tuple(tuple(_merge(ts)) for ts in per_target), metric)
    _check_d_squared(spec)
    return spec


def _merge(terms: list[StructureTerm]) -> list[StructureTerm]:
    acc: dict[tuple, GaussianRational] = {}
    for t in terms:
        key = (t.kind, t.i, t.j)
        acc[key] = acc.get(key, GaussianRational(0)) + t.coeff
    return [StructureTerm(k, i, j, c) for (k, i, j), c in sorted(acc.items(), key=lambda kv: (_KINDS.index(kv[0][0]), kv[0][1], kv[0][2])) if c]


def d_of_form(form: F.Form, gen_diff) -> F.Form:
    """Extend generator differentials to ``form`` by the graded Leibniz rule."""
    out: F.Form = {}
    for m, c in form.items():
        for pos, g in enumerate(m):
            dg = gen_diff[g]
            if not dg:
                continue
            piece = F.wedge(F.wedge({m[:pos]: GaussianRational(1)}, dg), {m[pos + 1 :]: GaussianRational(1)})
            if pos % 2:
                piece = F.scale(piece, -1)
            out = F.add(out, F.scale(piece, c))
    return out


def _check_d_squared(spec: LieComplexSpec) -> None:
    gd = spec.generator_differentials
    for k in range(spec.n):
        residual = d_of_form(gd[k], gd)
        if residual:
            raise NotALieAlgebra(
                f"d^2 mu{k + 1} = {F.format_form(residual, spec.n)} is not zero (Jacobi identity fails)",
                generator=k + 1,
                residual=residual,
            )


# ---------------------------------------------------------------------------


class FormBasis:
    """Ordered monomial bases per bidegree and per total degree.

    Degree ``k`` lists bidegrees ``(0,k), (1,k-1), ...`` in turn, each ordered
    lexicographically by the holomorphic then antiholomorphic index sets.
    """

    def __init__(self, n: int):
        self.n = n
        self.N = 2 * n
        holo = range(n)
        anti = range(n, 2 * n)
        self.by_degree: list[list[tuple]] = []
        self.bidegree_ranges: list[dict[tuple[int, int], range]] = []
        for k in range(self.N + 1):
            mons: list[tuple] = []
            ranges = {}
            for p in range(0, k + 1):
                q = k - p
                if p > n or q > n:
                    continue
                start = len(mons)
                for I in combinations(holo, p):
                    for J in combinations(anti, q):
                        mons.append(I + J)
                ranges[(p, q)] = range(start, len(mons))
            self.by_degree.append(mons)
            self.bidegree_ranges.append(ranges)
        self.index = [{m: i for i, m in enumerate(mons)} for mons in self.by_degree]
        self.dims = tuple(len(m) for m in self.by_degree)

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k <= self.N else 0

    def bidegree_dim(self, p: int, q: int) -> int:
        return comb(self.n, p) * comb(self.n, q) if 0 <= p <= self.n and 0 <= q <= self.n else 0

    def to_vector(self, form: F.Form, k: int | None = None) -> list[GaussianRational]:
        if k is None:
            k = F.form_degree(form) or 0
        v = [GaussianRational(0)] * self.dims[k]
        for m, c in form.items():
            if len(m) != k:
                raise ValueError(f"monomial of degree {len(m)} in a degree {k} vector")
            v[self.index[k][m]] = c
        return v

    def from_vector(self, vector, k: int) -> F.Form:
        return F.clean({self.by_degree[k][i]: GaussianRational.coerce(c) for i, c in enumerate(vector)})

    def monomial(self, k: int, i: int) -> tuple:
        return self.by_degree[k][i]

    def monomial_order_key(self, m: tuple):
        k = len(m)
        return (k, self.index[k][m])

    def format(self, form: F.Form) -> str:
        return F.format_form(form, self.n, order=self.monomial_order_key)

    def operator_from_action(self, action, shift: int, antilinear: bool = False) -> GradedOperator:
        """Matrix of a map given on monomials (``action(monomial) -> form``)."""
        blocks = {}
        for k in range(self.N + 1):
            t = k + shift
            if not 0 <= t <= self.N:
                continue
            cols = [self.to_vector(action(m), t) for m in self.by_degree[k]]
            blocks[k] = ExactMatrix.from_entries(cols, self.dims[t]).transpose() if cols else ExactMatrix.zeros(self.dims[t], 0)
        return GradedOperator(self.dims, blocks, shift=shift, antilinear=antilinear)


def build_basis(spec: LieComplexSpec | int, *, allow_large: bool = False) -> FormBasis:
    n = spec if isinstance(spec, int) else spec.n
    if not 1 <= n <= MAX_N and not (allow_large and n >= 1):
        raise SizeGuard(f"complex dimension {n} outside 1..{MAX_N}")
    return FormBasis(n)


@dataclass
class UntwistedOperators:
    dims: tuple
    partial: GradedOperator
    partial_bar: GradedOperator
    d: GradedOperator
    conjugation: GradedOperator


def _split_generator_differentials(spec: LieComplexSpec):
    n = spec.n
    del_gen, delbar_gen = [], []
    for g, f in enumerate(spec.generator_differentials):
        p0 = 1 if g < n else 0
        del_part = {m: c for m, c in f.items() if F.bidegree(m, n)[0] == p0 + 1}
        delbar_part = {m: c for m, c in f.items() if F.bidegree(m, n)[0] == p0}
        del_gen.append(del_part)
        delbar_gen.append(delbar_part)
    return tuple(del_gen), tuple(delbar_gen)


def assemble_untwisted(spec: LieComplexSpec, basis: FormBasis) -> UntwistedOperators:
    n = spec.n
    del_gen, delbar_gen = _split_generator_differentials(spec)
    one = GaussianRational(1)
    partial = basis.operator_from_action(lambda m: d_of_form({m: one}, del_gen), 1)
    partial_bar = basis.operator_from_action(lambda m: d_of_form({m: one}, delbar_gen), 1)
    d = partial + partial_bar
    conjugation = basis.operator_from_action(lambda m: F.conjugate({m: one}, n), 0, antilinear=True)

    if not (partial @ partial).is_zero():
        raise ConstructionError("del^2 != 0")
    if not (partial_bar @ partial_bar).is_zero():
        raise ConstructionError("delbar^2 != 0")
    if not partial.anticommutator(partial_bar).is_zero():
        raise ConstructionError("del delbar + delbar del != 0")
    if not (conjugation @ conjugation) == GradedOperator.identity(basis.dims):
        raise ConstructionError("conjugation is not an involution")
    if not (conjugation @ partial) == (partial_bar @ conjugation):
        raise ConstructionError("conjugation does not exchange del and delbar")
    return UntwistedOperators(basis.dims, partial, partial_bar, d, conjugation)
