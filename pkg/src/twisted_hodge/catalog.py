"""Built-in models.

``torus1..torus3`` are abelian (Kaehler with the flat metric).  ``nakamura``
is the invariant complex of the completely-solvable Nakamura manifold with
coframe ``dz1, exp(-(z1+zbar1)/2) dz2, exp((z1+zbar1)/2) dz3``; the lattice
does not enter the invariant complex.  ``iwasawa`` is a non-Kaehler
control model used for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from twisted_hodge import forms as F
from twisted_hodge.complex import LieComplexSpec, parse_and_validate
from twisted_hodge.errors import UnknownModel
from twisted_hodge.field import GaussianRational

__all__ = ["CatalogEntry", "builtin_model", "catalog_keys", "nakamura_scenario", "NakamuraScenario"]


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    spec: LieComplexSpec
    provenance: str
    twists: tuple = ()  # (theta1, theta2) text pairs of interest
    normative: bool = True


def _torus_doc(n):
    return {"name": f"torus{n}", "n": n, "d": []}


_DOCS = {
    "torus1": (_torus_doc(1), "abelian complex torus of dimension 1; flat metric is Kaehler", (("0", "0"), ("mu1", "0"), ("0", "mu1"), ("1/2i*mu1", "mu1"))),
    "torus2": (_torus_doc(2), "abelian complex torus of dimension 2; flat metric is Kaehler", (("0", "0"), ("mu1", "0"), ("mu1+1/2i*mu2", "mu2"))),
    "torus3": (_torus_doc(3), "abelian complex torus of dimension 3; flat metric is Kaehler", (("0", "0"), ("mu1", "0"), ("mu1+i*mu2", "mu3"))),
    "nakamura": (
        {
            "name": "nakamura",
            "n": 3,
            # d mu2 = -1/2 (mu1 + mubar1) ^ mu2,  d mu3 = 1/2 (mu1 + mubar1) ^ mu3
            "d": [
                {"target": 2, "terms": [
                    {"coeff": "-1/2", "kind": "holo", "i": 1, "j": 2},
                    {"coeff": "1/2", "kind": "mixed", "i": 2, "j": 1},
                ]},
                {"target": 3, "terms": [
                    {"coeff": "1/2", "kind": "holo", "i": 1, "j": 3},
                    {"coeff": "-1/2", "kind": "mixed", "i": 3, "j": 1},
                ]},
            ],
        },
        "completely-solvable Nakamura manifold, invariant forms; coframe "
        "<dz1, exp(-(z1+zbar1)/2) dz2, exp((z1+zbar1)/2) dz3>",
        (("1/2*mu1", "0"), ("0", "0"), ("0", "-1/2*mu1")),
    ),
    "iwasawa": (
        {
            "name": "iwasawa",
            "n": 3,
            "d": [{"target": 3, "terms": [{"coeff": "-1", "kind": "holo", "i": 1, "j": 2}]}],
        },
        "Iwasawa manifold (non-Kaehler control model for cross-checks)",
        (("0", "0"), ("mu1", "0"), ("0", "mu2")),
    ),
}


def catalog_keys() -> list[str]:
    return list(_DOCS)


def builtin_model(key: str) -> CatalogEntry:
    try:
        doc, provenance, twists = _DOCS[key]
    except KeyError:
        raise UnknownModel(f"unknown model {key!r}; known: {', '.join(_DOCS)}") from None
    return CatalogEntry(key, parse_and_validate(doc), provenance, twists, normative=key != "iwasawa")


@dataclass(frozen=True)
class NakamuraScenario:
    entry: CatalogEntry
    theta1: str = "1/2*mu1"
    theta2: str = "0"
    delbar_dims: tuple = (0, 0, 0, 0, 0, 0, 0)
    lemma_holds: bool = False
    lemma_failure_degree: int = 2
    hodge_decomposition_holds: bool = False
    witness: F.Form = field(default_factory=dict)
    primitive: F.Form = field(default_factory=dict)


def nakamura_scenario() -> NakamuraScenario:
    """Expected outcome for the twist ``theta1 = mu1/2, theta2 = 0`` on ``nakamura``."""
    half = GaussianRational(1, 0) / 2
    one = GaussianRational(1)
    # 1/2 (mu1 + mubar1) ^ mubar3 with generators mu1=0, mubar1=3, mubar3=5
    witness = {(0, 5): half, (3, 5): half}
    primitive = {(5,): one}
    return NakamuraScenario(builtin_model("nakamura"), witness=witness, primitive=primitive)
