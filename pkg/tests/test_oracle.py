"""Independent dimension oracles.

For n = 1 the twisted operators are written out by hand as sympy matrices, so
neither the operator assembly nor the subspace toolkit is involved.  For the
larger models the engine's operator blocks are fed to sympy and the
cohomology dimensions are recomputed from ranks alone.
"""

import pytest
import sympy
from sympy import I, Rational

from twisted_hodge.catalog import builtin_model
from twisted_hodge.cohomology import five_cohomologies
from twisted_hodge.complex import parse_and_validate
from twisted_hodge.errors import NotBottChernClosed
from twisted_hodge.twisted import twisted_complex

from oracles import dims_from_ranks, to_sympy, torus1_by_hand

TORUS1_TWISTS = [("0", "0", 0, 0), ("mu1", "0", 1, 0), ("0", "mu1", 0, 1), ("1/2i*mu1", "mu1", I / 2, 1), ("i*mu1", "-i*mu1", I, -I)]


@pytest.mark.parametrize("t1, t2, a, b", TORUS1_TWISTS)
def test_torus1_against_hand_matrices(t1, t2, a, b):
    D, Db = torus1_by_hand(a, b)
    assert (D[1] * D[0]).is_zero_matrix and (Db[1] * Db[0]).is_zero_matrix
    expected = dims_from_ranks((1, 2, 1), D, Db)
    data = five_cohomologies(twisted_complex(builtin_model("torus1").spec, t1, t2))
    assert data.all_dims() == expected
    if (a, b) != (0, 0):
        assert all(not any(v) for v in expected.values())


def test_nonabelian_curve_model():
    # d mu = 1/2 mu ^ mubar: integrable, d^2 = 0, delbar mu != 0
    spec = parse_and_validate({"n": 1, "d": [{"target": 1, "terms": [{"coeff": "1/2", "kind": "mixed", "i": 1, "j": 1}]}]})
    with pytest.raises(NotBottChernClosed):
        twisted_complex(spec, "mu1", "0")
    # del mubar = -1/2 mu^mubar, delbar mu = 1/2 mu^mubar, del mu = delbar mubar = 0
    h = Rational(1, 2)
    D = {0: sympy.zeros(2, 1), 1: sympy.Matrix([[-h, 0]])}
    Db = {0: sympy.zeros(2, 1), 1: sympy.Matrix([[0, h]])}
    expected = dims_from_ranks((1, 2, 1), D, Db)
    assert five_cohomologies(twisted_complex(spec)).all_dims() == expected
    assert expected["dR"] == [1, 1, 0] and expected["BC"] == [1, 0, 1]


@pytest.mark.parametrize(
    "key, t1, t2",
    [("nakamura", "1/2*mu1", "0"), ("nakamura", "0", "0"), ("iwasawa", "0", "0"), ("torus2", "mu1+1/2i*mu2", "mu2")],
)
def test_rank_oracle_on_engine_blocks(key, t1, t2):
    tc = twisted_complex(builtin_model(key).spec, t1, t2)
    N = tc.basis.N
    D = {k: to_sympy(tc.partial_tw.block(k)) for k in range(N)}
    Db = {k: to_sympy(tc.partial_bar_tw.block(k)) for k in range(N)}
    assert five_cohomologies(tc).all_dims() == dims_from_ranks(tc.dims, D, Db)
