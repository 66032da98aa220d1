import random

import pytest

from twisted_hodge import forms as F
from twisted_hodge.catalog import builtin_model
from twisted_hodge.cohomology import five_cohomologies
from twisted_hodge.complex import build_basis
from twisted_hodge.errors import BadMetric, NotKahler, ParseError
from twisted_hodge.field import I, GaussianRational
from twisted_hodge.hodge import (
    adjoints,
    build_metric,
    harmonic_spaces,
    hodge_star,
    inner,
    kahler_identity_suite,
    laplacians,
    parse_metric,
    star_duality_check,
)
from twisted_hodge.linalg import ExactMatrix
from twisted_hodge.twisted import twisted_complex

ONE = GaussianRational(1)


def setup(key, t1="0", t2="0", gram=None):
    tc = twisted_complex(builtin_model(key).spec, t1, t2)
    return tc, build_metric(tc.spec, tc.basis, gram)


def rand_vec(rng, size):
    return [GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(size)]


def test_parse_metric_formats():
    assert parse_metric(None, 2) is None and parse_metric("identity", 2) is None
    assert parse_metric("diag:2,1/2", 2) == ExactMatrix.from_entries([[2, 0], [0, GaussianRational(1, 0) / 2]])
    assert parse_metric('[["2", "i"], ["-i", "1"]]', 2) == ExactMatrix.from_entries([[2, I], [-I, 1]])
    with pytest.raises(ParseError):
        parse_metric("diag:1", 2)
    with pytest.raises(ParseError):
        parse_metric("[[1]]", 2)
    with pytest.raises(ParseError):
        parse_metric("lorentzian", 2)


@pytest.mark.parametrize("gram", ["diag:1,-1", "diag:1,0", [[1, 1], [0, 1]], [[1, 2], [2, 1]]])
def test_bad_metrics(gram):
    spec = builtin_model("torus2").spec
    with pytest.raises(BadMetric):
        build_metric(spec, build_basis(spec), gram)


def test_omega_and_volume():
    tc, metric = setup("torus1")
    assert metric.omega == F.parse_form("i*mu1^mubar1", 1)
    assert metric.vol == metric.omega and metric.kahler
    _, metric = setup("torus1", gram=[[2]])
    assert metric.omega == F.parse_form("1/2i*mu1^mubar1", 1)
    (v,) = metric.vol.values()
    assert inner(metric, [v], [v], 2) == ONE


@pytest.mark.parametrize("key, gram", [("torus1", [[3]]), ("torus2", [[2, I], [-I, 1]]), ("nakamura", "diag:1,2,1/3")])
def test_star_examples_and_involution(key, gram):
    tc, metric = setup(key, gram=gram)
    S = hodge_star(metric)
    N = tc.basis.N
    assert tc.basis.from_vector(S.apply(0, [ONE]), N) == metric.vol
    (v,) = metric.vol.values()
    assert S.apply(N, [v]) == [ONE]
    SS = S @ S
    for k in range(N + 1):
        assert SS.block(k) == ExactMatrix.identity(tc.dims[k]).scale((-1) ** k)


@pytest.mark.parametrize("key, gram", [("torus2", [[2, I], [-I, 1]]), ("iwasawa", "diag:1,3,2")])
def test_star_is_defined_by_the_wedge_pairing(key, gram):
    # alpha ^ star(beta) = (alpha, beta) vol, checked on every pair of monomials
    tc, metric = setup(key, gram=gram)
    S = hodge_star(metric)
    basis, N = tc.basis, tc.basis.N
    for k in (1, 2):
        for i, a in enumerate(basis.by_degree[k]):
            for j, b in enumerate(basis.by_degree[k]):
                e_a = [ONE if x == i else 0 for x in range(basis.dims[k])]
                e_b = [ONE if x == j else 0 for x in range(basis.dims[k])]
                star_b = basis.from_vector(S.apply(k, e_b), N - k)
                lhs = F.wedge({a: ONE}, star_b)
                rhs = F.scale(metric.vol, inner(metric, e_a, e_b, k))
                assert lhs == rhs


def test_star_is_antilinear_isometry():
    rng = random.Random(2)
    tc, metric = setup("torus2", gram=[[2, I], [-I, 1]])
    S = hodge_star(metric)
    for k in range(tc.basis.N + 1):
        x, y = rand_vec(rng, tc.dims[k]), rand_vec(rng, tc.dims[k])
        Sx, Sy = S.apply(k, x), S.apply(k, y)
        assert inner(metric, Sx, Sy, tc.basis.N - k) == inner(metric, y, x, k)
        c = GaussianRational(1, 2)
        assert S.apply(k, [c * a for a in x]) == [c.conj() * a for a in Sx]


@pytest.mark.parametrize(
    "key, t1, t2, gram",
    [("nakamura", "1/2*mu1", "0", None), ("torus2", "mu1", "i*mu2", [[2, I], [-I, 1]]), ("iwasawa", "0", "mu1", "diag:2,1,1")],
)
def test_adjoints_satisfy_the_defining_relation(key, t1, t2, gram):
    rng = random.Random(9)
    tc, metric = setup(key, t1, t2, gram)
    adj = adjoints(tc, metric)
    for op, op_star in ((tc.d_phi, adj.d_phi), (tc.partial_tw, adj.partial), (tc.partial_bar_tw, adj.partial_bar), (tc.L_phi, adj.Lambda_phi), (adj.L_omega, adj.Lambda_omega)):
        for k in op.degrees():
            t = op.target(k)
            x, y = rand_vec(rng, tc.dims[k]), rand_vec(rng, tc.dims[t])
            assert inner(metric, op.apply(k, x), y, t) == inner(metric, x, op_star.apply(t, y), k)


@pytest.mark.parametrize(
    "key, t1, t2, gram",
    [
        ("nakamura", "1/2*mu1", "0", None),
        ("nakamura", "1/2*mu1", "0", "diag:1,2,1/3"),
        ("iwasawa", "0", "0", None),
        ("torus2", "mu1+1/2i*mu2", "mu2", [[2, I], [-I, 1]]),
    ],
)
def test_harmonic_dims_match_cohomology(key, t1, t2, gram):
    tc, metric = setup(key, t1, t2, gram)
    lap = laplacians(tc, adjoints(tc, metric), metric)
    expected = five_cohomologies(tc).all_dims()
    assert harmonic_spaces(lap, expected) == expected


@pytest.mark.parametrize("key, t1, t2", [("torus2", "mu1+1/2i*mu2", "mu2"), ("nakamura", "1/2*mu1", "0"), ("iwasawa", "mu1", "0")])
def test_star_duality_with_dual_pair(key, t1, t2):
    tc, metric = setup(key, t1, t2)
    report = star_duality_check(tc, metric, "dual")
    assert report.ok


def test_star_duality_with_exchanged_pair_breaks_operator_identity():
    tc, metric = setup("torus2", "mu1+1/2i*mu2", "mu2")
    report = star_duality_check(tc, metric, "swapped")
    assert not report.identities["star Delta_BC = Delta_A' star"]
    assert all(report.dims.values())


@pytest.mark.parametrize(
    "key, t1, t2, gram",
    [("torus1", "i*mu1", "0", [[5]]), ("torus2", "mu1", "mu2", [[2, I], [-I, 1]]), ("torus3", "0", "mu3", "diag:1,2,3")],
)
def test_kahler_identities(key, t1, t2, gram):
    tc, metric = setup(key, t1, t2, gram)
    assert kahler_identity_suite(tc, metric).ok


def test_not_kahler():
    tc, metric = setup("iwasawa")
    assert not metric.kahler and metric.d_omega
    with pytest.raises(NotKahler):
        kahler_identity_suite(tc, metric)
