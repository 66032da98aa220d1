import json
from types import SimpleNamespace

import pytest

from twisted_hodge import forms as F
from twisted_hodge.catalog import builtin_model, nakamura_scenario
from twisted_hodge.cohomology import (
    MAPS,
    THEORIES,
    CohomologyReport,
    bigraded_dims,
    build_report,
    five_cohomologies,
    frolicher_audit,
    hodge_decomposition_verdict,
    lemma_verdict,
    map_name,
    membership_facts,
    natural_maps,
    witness_extract,
)
from twisted_hodge.errors import EquivalenceViolation, InequalityViolation, NoWitness
from twisted_hodge.twisted import twisted_complex


def data_for(key, t1="0", t2="0"):
    return five_cohomologies(twisted_complex(builtin_model(key).spec, t1, t2))


@pytest.fixture(scope="module")
def nakamura():
    s = nakamura_scenario()
    return five_cohomologies(twisted_complex(s.entry.spec, s.theta1, s.theta2))


def test_nakamura_twisted_dimensions(nakamura):
    assert nakamura.dims("delbar") == [0] * 7
    assert nakamura.dims("del") == [0] * 7
    assert nakamura.dims("dR") == [0, 2, 4, 4, 4, 2, 0]
    assert nakamura.dims("BC") == [0, 0, 4, 4, 4, 4, 0]
    assert nakamura.dims("A") == [0, 4, 4, 4, 4, 0, 0]


def test_nakamura_lemma_and_hodge_fail(nakamura):
    maps = natural_maps(nakamura)
    assert set(maps) == {map_name(a, b) for a, b in MAPS}
    lemma = lemma_verdict(maps)
    assert not lemma.holds
    assert lemma.failing_degrees[0] == 2 == nakamura_scenario().lemma_failure_degree
    assert lemma.failing_degrees == [2, 3, 4, 5]
    assert not any(lemma.conditions.values())
    holds, failing = hodge_decomposition_verdict(maps, lemma)
    assert not holds and failing == [1, 2, 3, 4, 5]


def test_nakamura_witness(nakamura):
    s = nakamura_scenario()
    w = witness_extract(nakamura)
    assert w.degree == 2
    assert w.form == s.witness
    assert w.primitive == s.primitive and w.primitive_operator == "delbar"
    assert all(w.facts.values()) and len(w.facts) == 4
    # the facts are recomputed from scratch on the parsed form text
    text = F.format_form(w.form, 3)
    vec = nakamura.tc.basis.to_vector(F.parse_form(text, 3), 2)
    assert membership_facts(nakamura.tc, 2, vec, "delbar") == w.facts


def test_no_witness_when_lemma_holds():
    with pytest.raises(NoWitness):
        witness_extract(data_for("torus2"))


def test_iwasawa_witness_is_genuine():
    data = data_for("iwasawa")
    lemma = lemma_verdict(natural_maps(data))
    assert not lemma.holds
    w = witness_extract(data)
    assert w.degree == lemma.failing_degrees[0]
    assert all(w.facts.values())


@pytest.mark.parametrize("key", ["torus1", "torus2", "torus3"])
def test_untwisted_tori_are_exterior_algebras(key):
    from math import comb

    data = data_for(key)
    n = builtin_model(key).spec.n
    for t in THEORIES:
        assert data.dims(t) == [comb(2 * n, k) for k in range(2 * n + 1)]
    lemma = lemma_verdict(natural_maps(data))
    assert lemma.holds and all(lemma.implications.values())


@pytest.mark.parametrize("key, t1, t2", [("torus1", "mu1", "0"), ("torus2", "0", "mu2"), ("torus3", "mu1+i*mu2", "mu3")])
def test_nontrivial_twist_kills_torus_cohomology(key, t1, t2):
    data = data_for(key, t1, t2)
    for t in THEORIES:
        assert not any(data.dims(t))


def test_iwasawa_untwisted_dimensions():
    data = data_for("iwasawa")
    assert data.dims("dR") == [1, 4, 8, 10, 8, 4, 1]
    assert data.dims("delbar") == [1, 5, 11, 14, 11, 5, 1]
    assert data.dims("BC") == [1, 4, 10, 14, 12, 6, 1]
    assert data.dims("A") == [1, 6, 12, 14, 10, 4, 1]


@pytest.mark.parametrize(
    "key, t2", [("iwasawa", "0"), ("nakamura", "-1/2*mu1"), ("nakamura", "0"), ("torus2", "mu1+i*mu2")]
)
def test_bigraded_tables_sum_to_total(key, t2):
    data = data_for(key, "0", t2)
    table = bigraded_dims(data.tc)
    n = data.tc.n
    for t in ("del", "delbar", "BC", "A"):
        totals = [sum(table[t][p][k - p] for p in range(n + 1) if 0 <= k - p <= n) for k in range(2 * n + 1)]
        assert totals == data.dims(t)


def test_frolicher_audit_records(nakamura):
    records = frolicher_audit(nakamura.all_dims(), theta1_is_zero=False)
    assert all(r.holds for r in records)
    assert records[2].bc_plus_a == 8 and records[2].del_plus_delbar == 0
    assert records[0].asserted == ("bc+a>=del+delbar",)


def test_frolicher_audit_raises_on_bad_dims():
    dims = {"dR": [1], "del": [2], "delbar": [2], "BC": [1], "A": [1]}
    with pytest.raises(InequalityViolation):
        frolicher_audit(dims, theta1_is_zero=False)
    dims = {"dR": [3], "del": [1], "delbar": [1], "BC": [3], "A": [3]}
    frolicher_audit(dims, theta1_is_zero=False)
    with pytest.raises(InequalityViolation):
        frolicher_audit(dims, theta1_is_zero=True)


def fake_maps(**overrides):
    good = SimpleNamespace(injective=True, surjective=True, bijective=True)
    maps = {map_name(a, b): [good] for a, b in MAPS}
    for name, m in overrides.items():
        maps[name.replace("_", "->")] = [m]
    return maps


def test_lemma_consistency_is_enforced():
    bad = SimpleNamespace(injective=False, surjective=False, bijective=False)
    with pytest.raises(EquivalenceViolation):
        lemma_verdict(fake_maps(BC_A=bad))
    with pytest.raises(EquivalenceViolation):
        lemma_verdict(fake_maps(dR_A=bad))
    assert lemma_verdict(fake_maps()).holds


def test_report_roundtrip(nakamura):
    report = build_report(nakamura)
    doc = json.loads(json.dumps(report.to_dict()))
    assert CohomologyReport.from_dict(doc) == report
    assert doc["euler_characteristic"] == 0
    assert doc["witness"]["form"] == "1/2*mu1^mubar3 + 1/2*mubar1^mubar3"
    assert doc["witness"]["primitive"] == "mubar3"
    assert "bigraded" not in doc


def test_report_degree_filter():
    report = build_report(data_for("nakamura", "0", "-1/2*mu1"), degrees=[0, 2])
    assert report.degrees == [0, 2]
    assert all(len(v) == 2 for v in report.dims.values())
    assert report.bigraded is not None
