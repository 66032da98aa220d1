"""Twisted de Rham, Dolbeault, Bott-Chern and Aeppli cohomology.

All five theories are computed per total degree from exact kernels and
images.  The seven identity-induced maps between them are analysed on the
level of cycle/boundary subspaces, which gives the Lemma and
Hodge-decomposition verdicts and the Froelicher-type inequality audit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from twisted_hodge import forms as F
from twisted_hodge.errors import ConstructionError, EquivalenceViolation, InequalityViolation, NoWitness
from twisted_hodge.field import GaussianRational
from twisted_hodge.linalg import ExactMatrix, gauss_jordan
from twisted_hodge.subspace import QuotientMap, Subspace, induced_quotient_map
from twisted_hodge.twisted import TwistedComplex

__all__ = [
    "THEORIES",
    "MAPS",
    "TheoryData",
    "CohomologyData",
    "five_cohomologies",
    "natural_maps",
    "LemmaVerdict",
    "lemma_verdict",
    "hodge_decomposition_verdict",
    "frolicher_audit",
    "InequalityRecord",
    "Witness",
    "witness_extract",
    "membership_facts",
    "bigraded_dims",
    "CohomologyReport",
    "build_report",
    "witness_to_dict",
    "SCHEMA",
]

THEORIES = ("dR", "del", "delbar", "BC", "A")
MAPS = (
    ("BC", "del"),
    ("BC", "dR"),
    ("BC", "delbar"),
    ("BC", "A"),
    ("del", "A"),
    ("dR", "A"),
    ("delbar", "A"),
)


def map_name(src: str, dst: str) -> str:
    return f"{src}->{dst}"


@dataclass
class TheoryData:
    name: str
    cycles: list  # Subspace per degree
    boundaries: list

    @property
    def dims(self) -> list[int]:
        return [z.dim - b.dim for z, b in zip(self.cycles, self.boundaries)]


@dataclass
class CohomologyData:
    tc: TwistedComplex
    theories: dict

    def dims(self, theory: str) -> list[int]:
        return self.theories[theory].dims

    def all_dims(self) -> dict:
        return {t: self.dims(t) for t in THEORIES}


def _kernel(block: ExactMatrix | None, dim: int) -> Subspace:
    if block is None:
        return Subspace.full(dim)
    return Subspace.kernel(block)


def _image(block: ExactMatrix | None, dim: int) -> Subspace:
    if block is None:
        return Subspace.zero(dim)
    return Subspace.image(block)


def five_cohomologies(tc: TwistedComplex) -> CohomologyData:
    dims = tc.dims
    N = len(dims) - 1
    dd = tc.partial_partial_bar
    ops = {"dR": tc.d_phi, "del": tc.partial_tw, "delbar": tc.partial_bar_tw}
    theories = {}
    for name, op in ops.items():
        cycles = [_kernel(op.block(k), dims[k]) for k in range(N + 1)]
        bounds = [Subspace.zero(dims[0])] + [_image(op.block(k - 1), dims[k]) for k in range(1, N + 1)]
        theories[name] = TheoryData(name, cycles, bounds)

    bc_cycles, bc_bounds, a_cycles, a_bounds = [], [], [], []
    for k in range(N + 1):
        a, b = tc.partial_tw.block(k), tc.partial_bar_tw.block(k)
        bc_cycles.append(Subspace.full(dims[k]) if a is None else Subspace.kernel(a.vstack(b)))
        bc_bounds.append(_image(dd.block(k - 2), dims[k]) if k >= 2 else Subspace.zero(dims[k]))
        a_cycles.append(_kernel(dd.block(k), dims[k]))
        if k == 0:
            a_bounds.append(Subspace.zero(dims[0]))
        else:
            a_bounds.append(
                Subspace.image(tc.partial_tw.block(k - 1).hstack(tc.partial_bar_tw.block(k - 1)))
            )
    theories["BC"] = TheoryData("BC", bc_cycles, bc_bounds)
    theories["A"] = TheoryData("A", a_cycles, a_bounds)
    return CohomologyData(tc, theories)


def natural_maps(data: CohomologyData) -> dict:
    """``{"BC->A": [QuotientMap per degree], ...}`` for the seven identity-induced maps."""
    out = {}
    for src, dst in MAPS:
        s, t = data.theories[src], data.theories[dst]
        out[map_name(src, dst)] = [
            induced_quotient_map(s.cycles[k], s.boundaries[k], t.cycles[k], t.boundaries[k])
            for k in range(len(s.cycles))
        ]
    return out


def _all(maps: Sequence[QuotientMap], attr: str) -> bool:
    return all(getattr(m, attr) for m in maps)


@dataclass
class LemmaVerdict:
    holds: bool
    failing_degrees: list
    conditions: dict  # the four equivalent characterizations
    implications: dict  # consequences checked when the lemma holds


def lemma_verdict(maps: dict) -> LemmaVerdict:
    bc_a = maps["BC->A"]
    conditions = {
        "BC->A injective": _all(bc_a, "injective"),
        "BC->A bijective": _all(bc_a, "bijective"),
        "BC->del and BC->delbar injective": _all(maps["BC->del"], "injective")
        and _all(maps["BC->delbar"], "injective"),
        "del->A and delbar->A surjective": _all(maps["del->A"], "surjective")
        and _all(maps["delbar->A"], "surjective"),
    }
    holds = conditions["BC->A injective"]
    if any(v != holds for v in conditions.values()):
        raise EquivalenceViolation(f"equivalent characterizations disagree: {conditions}")
    implications = {
        "BC->dR injective": _all(maps["BC->dR"], "injective"),
        "dR->A surjective": _all(maps["dR->A"], "surjective"),
    }
    if holds and not all(implications.values()):
        raise EquivalenceViolation(f"lemma holds but its consequences fail: {implications}")
    failing = [k for k, m in enumerate(bc_a) if not m.injective]
    return LemmaVerdict(holds, failing, conditions, implications)


def hodge_decomposition_verdict(maps: dict, lemma: LemmaVerdict | None = None) -> tuple[bool, list]:
    """True iff BC->del, BC->dR and BC->delbar are isomorphisms in every degree."""
    names = ("BC->del", "BC->dR", "BC->delbar")
    failing = sorted({k for nm in names for k, m in enumerate(maps[nm]) if not m.bijective})
    holds = not failing
    if lemma is None:
        lemma = lemma_verdict(maps)
    if holds and not lemma.holds:
        raise EquivalenceViolation("Hodge decomposition holds but the Lemma fails")
    return holds, failing


@dataclass
class InequalityRecord:
    degree: int
    bc_plus_a: int
    del_plus_delbar: int
    holds: bool
    delbar_ge_dR: bool
    del_ge_dR: bool
    bc_plus_a_ge_2dR: bool
    asserted: tuple  # names of the inequalities that are theorems for this twist


def frolicher_audit(dims: dict, theta1_is_zero: bool) -> list[InequalityRecord]:
    records = []
    for k in range(len(dims["dR"])):
        bc_a = dims["BC"][k] + dims["A"][k]
        dd = dims["del"][k] + dims["delbar"][k]
        rec = InequalityRecord(
            degree=k,
            bc_plus_a=bc_a,
            del_plus_delbar=dd,
            holds=bc_a >= dd,
            delbar_ge_dR=dims["delbar"][k] >= dims["dR"][k],
            del_ge_dR=dims["del"][k] >= dims["dR"][k],
            bc_plus_a_ge_2dR=bc_a >= 2 * dims["dR"][k],
            asserted=("bc+a>=del+delbar",)
            + (("delbar>=dR", "del>=dR", "bc+a>=2dR") if theta1_is_zero else ()),
        )
        if not rec.holds:
            raise InequalityViolation(f"degree {k}: h_BC + h_A = {bc_a} < h_del + h_delbar = {dd}")
        if theta1_is_zero and not (rec.delbar_ge_dR and rec.del_ge_dR and rec.bc_plus_a_ge_2dR):
            raise InequalityViolation(f"degree {k}: Froelicher inequality fails with theta1 = 0: {rec}")
        records.append(rec)
    return records


# ---------------------------------------------------------------------------


@dataclass
class Witness:
    degree: int
    vector: list
    form: F.Form
    primitive: F.Form | None
    primitive_operator: str | None  # "delbar" or "del"
    facts: dict = field(default_factory=dict)


def membership_facts(tc: TwistedComplex, k: int, vec, operator: str | None = "delbar") -> dict:
    """The four facts that make ``vec`` a witness, recomputed directly from the operators."""
    N = tc.basis.N
    zero_after = lambda op: k == N or not any(op.apply(k, vec))
    if operator is None:
        label = "im del_tw + im delbar_tw"
        exact = k > 0 and Subspace.image(tc.partial_tw.block(k - 1).hstack(tc.partial_bar_tw.block(k - 1))).contains_vector(vec)
    else:
        op = tc.partial_bar_tw if operator == "delbar" else tc.partial_tw
        label = f"im {operator}_tw"
        exact = k > 0 and Subspace.image(op.block(k - 1)).contains_vector(vec)
    dd = tc.partial_partial_bar.block(k - 2) if k >= 2 else None
    return {
        "del_tw(w) = 0": zero_after(tc.partial_tw),
        "delbar_tw(w) = 0": zero_after(tc.partial_bar_tw),
        f"w in {label}": exact,
        "w not in im del_tw delbar_tw": dd is None or not Subspace.image(dd).contains_vector(vec),
    }


def witness_extract(data: CohomologyData, degree: int | None = None) -> Witness:
    """A form closed for both twisted operators, exact for their sum, but not del_tw delbar_tw-exact.

    Candidates ``delbar_tw(x)`` then ``del_tw(x)`` over basis monomials ``x`` are
    tried first, so the witness carries a one-term primitive whenever one
    exists.  Ties are broken by fewest terms, then fewest negative
    coefficients, then basis order.
    """
    tc = data.tc
    bc = data.theories["BC"]
    a_b = data.theories["A"].boundaries
    degrees = [degree] if degree is not None else range(len(bc.cycles))
    for k in degrees:
        inter = bc.cycles[k] & a_b[k]
        if inter.is_subspace_of(bc.boundaries[k]):
            continue
        best = None
        if k >= 1:
            for op_name, op in (("delbar", tc.partial_bar_tw), ("del", tc.partial_tw)):
                block = op.block(k - 1)
                for j in range(block.cols):
                    w = block.column(j)
                    if not any(w) or not bc.cycles[k].contains_vector(w):
                        continue
                    if bc.boundaries[k].contains_vector(w):
                        continue
                    key = (sum(1 for x in w if x), sum(1 for x in w if x.re < 0 or (x.re == 0 and x.im < 0)))
                    if best is None or key < best[0]:
                        prim = {tc.basis.monomial(k - 1, j): GaussianRational(1)}
                        best = (key, w, prim, op_name)
        if best is None:
            # no monomial primitive: take a basis vector of the intersection
            w = next(v for v in inter.vectors() if not bc.boundaries[k].contains_vector(v))
            prim, op_name = _find_primitive(tc, k, w)
            best = (None, w, prim, op_name)
        _, w, prim, op_name = best
        wit = Witness(k, w, tc.basis.from_vector(w, k), prim, op_name)
        wit.facts = membership_facts(tc, k, w, op_name)
        return wit
    raise NoWitness("the Lemma holds in every requested degree; no witness exists")


def _find_primitive(tc: TwistedComplex, k: int, w):
    for op_name, op in (("delbar", tc.partial_bar_tw), ("del", tc.partial_tw)):
        block = op.block(k - 1)
        aug = block.hstack(ExactMatrix.from_entries([[x] for x in w], 1))
        gj = gauss_jordan(aug)
        if gj.rank == gauss_jordan(block).rank:
            # a solution x of block x = w: nullspace vector with last coordinate nonzero
            for v in gj.nullspace_vectors():
                if v[-1]:
                    scale = -v[-1].inverse()
                    x = [c * scale for c in v[:-1]]
                    return tc.basis.from_vector(x, k - 1), op_name
    return None, None


def bigraded_dims(tc: TwistedComplex) -> dict:
    """Per-bidegree dims of del, delbar, BC and A cohomology (only meaningful when theta1 = 0)."""
    basis = tc.basis
    n = basis.n
    dd = tc.partial_partial_bar

    def cols(op, p, q):
        k = p + q
        if not (0 <= p <= n and 0 <= q <= n):
            return None
        block = op.block(k)
        rng = basis.bidegree_ranges[k][(p, q)]
        if block is None:
            return ExactMatrix.zeros(0, len(rng))
        return block.submatrix(range(block.rows), rng)

    def rank(m):
        return 0 if m is None or m.cols == 0 or m.rows == 0 else gauss_jordan(m).rank

    out = {t: [[0] * (n + 1) for _ in range(n + 1)] for t in ("del", "delbar", "BC", "A")}
    for p in range(n + 1):
        for q in range(n + 1):
            dim = basis.bidegree_dim(p, q)
            dl, dlb = cols(tc.partial_tw, p, q), cols(tc.partial_bar_tw, p, q)
            out["del"][p][q] = dim - rank(dl) - rank(cols(tc.partial_tw, p - 1, q))
            out["delbar"][p][q] = dim - rank(dlb) - rank(cols(tc.partial_bar_tw, p, q - 1))
            out["BC"][p][q] = dim - rank(dl.vstack(dlb)) - rank(cols(dd, p - 1, q - 1))
            a_from = [m for m in (cols(tc.partial_tw, p - 1, q), cols(tc.partial_bar_tw, p, q - 1)) if m is not None]
            a_rank = 0
            if a_from:
                stacked = a_from[0] if len(a_from) == 1 else a_from[0].hstack(a_from[1])
                a_rank = rank(stacked)
            out["A"][p][q] = dim - rank(cols(dd, p, q)) - a_rank
    return out


# ---------------------------------------------------------------------------
# report

SCHEMA = "twisted-hodge/1"


@dataclass
class CohomologyReport:
    """JSON-ready summary of one model/twist run."""

    model: str
    n: int
    twist: dict
    degrees: list
    dims: dict
    maps: dict
    verdicts: dict
    inequalities: list
    euler_characteristic: int
    bigraded: dict | None = None
    witness: dict | None = None
    harmonic: dict | None = None
    schema: str = SCHEMA

    def to_dict(self) -> dict:
        out = {
            "schema": self.schema,
            "model": self.model,
            "n": self.n,
            "twist": self.twist,
            "degrees": self.degrees,
            "dims": self.dims,
            "maps": self.maps,
            "verdicts": self.verdicts,
            "inequalities": self.inequalities,
            "euler_characteristic": self.euler_characteristic,
        }
        for key in ("bigraded", "witness", "harmonic"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> "CohomologyReport":
        fields = dict(doc)
        return cls(**fields)


def witness_to_dict(w: Witness, n: int) -> dict:
    return {
        "degree": w.degree,
        "form": F.format_form(w.form, n),
        "primitive": None if w.primitive is None else F.format_form(w.primitive, n),
        "primitive_operator": w.primitive_operator,
        "facts": dict(w.facts),
    }


def build_report(data: CohomologyData, degrees: Sequence[int] | None = None, *, with_witness: bool = True) -> CohomologyReport:
    """Run maps, verdicts and the inequality audit; restrict the per-degree output to ``degrees``."""
    tc = data.tc
    N = tc.basis.N
    degs = sorted(set(degrees)) if degrees is not None else list(range(N + 1))
    dims_all = data.all_dims()
    maps = natural_maps(data)
    lemma = lemma_verdict(maps)
    hodge, hodge_failing = hodge_decomposition_verdict(maps, lemma)
    records = frolicher_audit(dims_all, tc.twist.theta1_is_zero)
    verdicts = {
        "lemma_holds": lemma.holds,
        "lemma_failing_degrees": lemma.failing_degrees,
        "lemma_conditions": lemma.conditions,
        "lemma_implications": lemma.implications,
        "hodge_decomposition_holds": hodge,
        "hodge_failing_degrees": hodge_failing,
        "frolicher_ok": all(r.holds for r in records),
        "invariant_level": True,
    }
    euler = sum((-1) ** k * h for k, h in enumerate(dims_all["dR"]))
    if euler != 0:
        raise ConstructionError(f"Euler characteristic of the twisted de Rham complex is {euler}, not 0")
    witness = None
    if with_witness and not lemma.holds:
        in_range = [k for k in lemma.failing_degrees if k in degs]
        if in_range:
            witness = witness_to_dict(witness_extract(data, in_range[0]), tc.n)
    return CohomologyReport(
        model=tc.spec.name,
        n=tc.n,
        twist=tc.twist.describe(),
        degrees=degs,
        dims={t: [dims_all[t][k] for k in degs] for t in THEORIES},
        maps={
            name: [{"rank": ms[k].rank, "injective": ms[k].injective, "surjective": ms[k].surjective} for k in degs]
            for name, ms in maps.items()
        },
        verdicts=verdicts,
        inequalities=[
            {
                "degree": r.degree,
                "bc_plus_a": r.bc_plus_a,
                "del_plus_delbar": r.del_plus_delbar,
                "holds": r.holds,
                "delbar_ge_dR": r.delbar_ge_dR,
                "del_ge_dR": r.del_ge_dR,
                "bc_plus_a_ge_2dR": r.bc_plus_a_ge_2dR,
                "asserted": list(r.asserted),
            }
            for r in records
            if r.degree in degs
        ],
        euler_characteristic=euler,
        bigraded=bigraded_dims(tc) if tc.twist.theta1_is_zero else None,
        witness=witness,
    )
