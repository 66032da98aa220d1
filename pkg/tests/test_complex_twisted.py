import pytest

from twisted_hodge import forms as F
from twisted_hodge.catalog import builtin_model, catalog_keys, nakamura_scenario
from twisted_hodge.complex import assemble_untwisted, build_basis, parse_and_validate
from twisted_hodge.errors import (
    NotALieAlgebra,
    NotBottChernClosed,
    NotIntegrable,
    ParseError,
    SizeGuard,
    UnknownModel,
)
from twisted_hodge.field import GaussianRational
from twisted_hodge.linalg import ExactMatrix
from twisted_hodge.twisted import (
    TwistPair,
    conjugate_twist,
    conjugation_symmetry_holds,
    left_multiplication,
    leibniz_check,
    twisted_complex,
    validate_twist,
)

ONE = GaussianRational(1)
HALF = ONE / 2


def apply(op, basis, form):
    k = F.form_degree(form) or 0
    return basis.from_vector(op.apply(k, basis.to_vector(form, k)), op.target(k))


def parse(text, n):
    return F.parse_form(text, n)


# -- parsing -----------------------------------------------------------------


def test_rejects_non_integrable_structure():
    doc = {"n": 2, "d": [{"target": 1, "terms": [{"coeff": "1", "kind": "anti", "i": 1, "j": 2}]}]}
    with pytest.raises(NotIntegrable):
        parse_and_validate(doc)


def test_rejects_failed_jacobi():
    doc = {
        "n": 3,
        "d": [
            {"target": 1, "terms": [{"coeff": "1", "kind": "mixed", "i": 1, "j": 1}]},
            {"target": 3, "terms": [{"coeff": "1", "kind": "holo", "i": 1, "j": 2}]},
        ],
    }
    with pytest.raises(NotALieAlgebra) as info:
        parse_and_validate(doc)
    assert info.value.generator == 3


@pytest.mark.parametrize(
    "doc",
    [
        {"d": []},
        {"n": 0},
        {"n": "2"},
        {"n": 2, "d": [{"target": 3, "terms": []}]},
        {"n": 2, "d": [{"target": 1, "terms": [{"coeff": "1", "kind": "odd", "i": 1, "j": 2}]}]},
        {"n": 2, "d": [{"target": 1, "terms": [{"coeff": 0.5, "kind": "holo", "i": 1, "j": 2}]}]},
        {"n": 2, "d": [{"target": 1, "terms": [{"coeff": "1", "kind": "holo", "i": 1, "j": 5}]}]},
        "not json",
    ],
)
def test_parse_errors(doc):
    with pytest.raises(ParseError):
        parse_and_validate(doc)


def test_size_guard():
    with pytest.raises(SizeGuard):
        parse_and_validate({"n": 6, "d": []})
    assert parse_and_validate({"n": 6, "d": []}, allow_large=True).n == 6
    with pytest.raises(SizeGuard):
        build_basis(6)


def test_document_roundtrip():
    spec = builtin_model("nakamura").spec
    assert parse_and_validate(spec.to_document()) == spec


# -- basis and untwisted operators -------------------------------------------


def test_basis_dimensions():
    assert build_basis(1).dims == (1, 2, 1)
    b3 = build_basis(3)
    assert b3.dims == (1, 6, 15, 20, 15, 6, 1)
    assert len(b3.bidegree_ranges[2][(1, 1)]) == 9 == b3.bidegree_dim(1, 1)
    # degree one is ordered mubar1..mubar3, then mu1..mu3
    assert [F.monomial_name(m, 3) for m in b3.by_degree[1]] == ["mubar1", "mubar2", "mubar3", "mu1", "mu2", "mu3"]


def test_nakamura_structure_equations():
    spec = builtin_model("nakamura").spec
    basis = build_basis(spec)
    ops = assemble_untwisted(spec, basis)
    assert apply(ops.partial, basis, parse("mu2", 3)) == parse("-1/2*mu1^mu2", 3)
    assert apply(ops.partial_bar, basis, parse("mu2", 3)) == parse("1/2*mu2^mubar1", 3)
    assert apply(ops.partial, basis, parse("mu3", 3)) == parse("1/2*mu1^mu3", 3)
    assert apply(ops.partial_bar, basis, parse("mubar3", 3)) == parse("1/2*mubar1^mubar3", 3)
    assert apply(ops.d, basis, parse("mu1", 3)) == {}
    for k, size in enumerate(basis.dims):
        assert (ops.conjugation @ ops.conjugation).block(k) == ExactMatrix.identity(size)


def test_catalog_entries_validate():
    assert set(catalog_keys()) >= {"torus1", "torus2", "torus3", "nakamura"}
    for key in catalog_keys():
        entry = builtin_model(key)
        for theta1, theta2 in entry.twists:
            twisted_complex(entry.spec, theta1, theta2)
    with pytest.raises(UnknownModel):
        builtin_model("klein")


# -- twists ------------------------------------------------------------------


def test_twist_validation():
    torus = builtin_model("torus1").spec
    pair = validate_twist(torus, "mu1", "0")
    assert pair.phi == parse("mu1 + mubar1", 1)
    naka = builtin_model("nakamura").spec
    validate_twist(naka, "1/2*mu1", "0")
    with pytest.raises(NotBottChernClosed):
        validate_twist(naka, "mu2", "0")
    with pytest.raises(ParseError):
        validate_twist(torus, "mubar1", "0")
    with pytest.raises(ParseError):
        validate_twist(torus, [1, 2], "0")


def test_phi_of_theta2():
    pair = validate_twist(builtin_model("torus1").spec, "0", "mu1")
    assert pair.phi == parse("mu1 - mubar1", 1)


def test_left_multiplication_examples():
    basis = build_basis(1)
    L = left_multiplication(basis, parse("mubar1", 1))
    assert apply(L, basis, parse("mu1", 1)) == parse("-mu1^mubar1", 1)
    assert apply(L, basis, parse("mubar1", 1)) == {}
    L = left_multiplication(basis, parse("mu1", 1))
    assert apply(L, basis, {(): ONE}) == parse("mu1", 1)


def test_twisted_operator_values():
    s = nakamura_scenario()
    tc = twisted_complex(s.entry.spec, s.theta1, s.theta2)
    assert apply(tc.partial_bar_tw, tc.basis, parse("mubar3", 3)) == s.witness
    assert apply(tc.partial_tw, tc.basis, parse("mubar3", 3)) == parse("1/2*mu1^mubar3 + 1/2*mubar1^mubar3", 3)
    assert apply(tc.partial_tw, tc.basis, s.witness) == {}
    torus = twisted_complex(builtin_model("torus1").spec, "mu1", "0")
    assert apply(torus.d_phi, torus.basis, {(): ONE}) == parse("mu1 + mubar1", 1)


def test_zero_twist_reduces_to_untwisted():
    tc = twisted_complex(builtin_model("nakamura").spec, "0", "0")
    assert tc.partial_tw == tc.untwisted.partial
    assert tc.partial_bar_tw == tc.untwisted.partial_bar
    assert tc.d_phi == tc.untwisted.d


@pytest.mark.parametrize("key, t1, t2", [("nakamura", "1/2*mu1", "0"), ("torus2", "mu1+1/2i*mu2", "mu2")])
def test_leibniz_rule(key, t1, t2):
    tc = twisted_complex(builtin_model(key).spec, t1, t2)
    assert leibniz_check(tc).ok
    # check on a non-closed coefficient form too
    alpha = parse("mu2", tc.n)
    assert leibniz_check(tc, [alpha]).ok


def test_conjugation_symmetry():
    for key, t1, t2 in [("torus1", "i*mu1", "mu1"), ("nakamura", "1/2*mu1", "-1/2*mu1"), ("torus2", "mu1", "1/2i*mu2")]:
        spec = builtin_model(key).spec
        tc = twisted_complex(spec, t1, t2)
        partner = conjugate_twist(tc.twist)
        other = twisted_complex(spec, partner.theta1, partner.theta2)
        assert conjugation_symmetry_holds(tc, other)


def test_conjugation_symmetry_with_exchanged_thetas_fails():
    spec = builtin_model("torus1").spec
    tc = twisted_complex(spec, "mu1", "0")
    swapped = twisted_complex(spec, "0", "mu1")
    assert not conjugation_symmetry_holds(tc, swapped)


def test_bidegree_blocks_when_theta1_vanishes():
    tc = twisted_complex(builtin_model("torus2").spec, "0", "mu1+i*mu2")
    basis = tc.basis
    for k in range(basis.N):
        block = tc.partial_tw.block(k)
        for (p, q), src in basis.bidegree_ranges[k].items():
            for (p2, q2), dst in basis.bidegree_ranges[k + 1].items():
                if (p2, q2) == (p + 1, q):
                    continue
                assert all(not block[i, j] for i in dst for j in src)


def test_twist_pair_helpers():
    pair = TwistPair(2, (ONE, HALF), (HALF, GaussianRational(0)))
    assert pair.dual().theta1 == (-ONE, -HALF)
    assert pair.swapped_dual().theta1 == (-HALF, GaussianRational(0))
    assert not pair.theta1_is_zero and not pair.is_zero()
