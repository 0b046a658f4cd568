from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fihom.degree import NEG_INF
from fihom.filtered import (BasicFilteredSpec, GrowthMismatch, basic_filtered,
                            complex_window_demand, filtered_complex, filtered_window,
                            fit_polynomial, format_poly, is_filtered, representation_of,
                            stable_threshold)
from fihom.homology import gd, hd
from fihom.modules import Bounds, WindowError, compile_presentation, direct_sum, free_module
from fihom.shift import shift, torsion_degree

from helpers import F101, QQ, corpus_module, group, k0, module

G1, G2 = group(1), group(2)


def test_stable_threshold():
    assert stable_threshold(0, NEG_INF) == 0
    assert stable_threshold(1, NEG_INF) == 1
    assert stable_threshold(2, NEG_INF) == 3
    assert stable_threshold(2, 5) == 6
    assert stable_threshold(NEG_INF, NEG_INF) == 0


def test_filtered_window():
    assert filtered_window(Bounds(2, 3)) == 6
    assert filtered_window(Bounds(2, NEG_INF)) == 5
    assert filtered_window(Bounds()) == 0


# -- basic filtered modules ----------------------------------------------------

def test_basic_filtered_trivial_degree_zero():
    spec = BasicFilteredSpec(0, 1, [], [np.eye(1, dtype=np.int64)])
    assert basic_filtered(spec, 5, F101, G1).dims == [1] * 6


@pytest.mark.parametrize("order", [1, 2])
@pytest.mark.parametrize("m", [1, 2])
def test_regular_representation_gives_free(m, order):
    G = group(order)
    M = free_module([m], 5, F101, G)
    B = basic_filtered(representation_of(M, m), 5, F101, G)
    assert B.dims == M.dims


def test_sign_representation_over_q():
    sign = BasicFilteredSpec(2, 1, [QQ.neg(QQ.eye(1))], [QQ.eye(1)])
    B = basic_filtered(sign, 6, QQ, G1)
    assert B.dims == [comb(m, 2) for m in range(7)]


def test_basic_filtered_refuses_short_window():
    with pytest.raises(WindowError):
        basic_filtered(BasicFilteredSpec(4, 1, [], []), 3, F101, G1)


# -- filtration test -------------------------------------------------------------

def test_free_is_filtered():
    V = direct_sum(free_module([0], 5, F101, G2), free_module([2], 5, F101, G2))
    v = is_filtered(V)
    assert v and [w.degree for w in v.witness] == [0, 2]


def test_k0_is_not_filtered():
    v = is_filtered(k0())
    assert not v
    assert (v.failure_degree, v.expected, v.found) == (1, 1, 0)
    assert v.to_json()["failure_degree"] == 1


def test_shifted_quotient_is_filtered():
    # one generator whose two images in degree 2 agree: dims 0,1,1,1,...
    V = module([1], [(2, [(0, (1,), (0,), 1), (0, (2,), (0,), -1)])], window=8)
    v = is_filtered(V)
    assert not v and (v.failure_degree, v.expected, v.found) == (2, 2, 1)
    assert is_filtered(shift(V, 1))


# -- the complex --------------------------------------------------------------------

@pytest.mark.parametrize("m,shifts", [(0, [0]), (1, [1, 0]), (2, [3, 1, 0])])
def test_complex_of_free(m, shifts):
    V = free_module([m], 8, F101, G1)
    cx = filtered_complex(V)
    assert cx.shifts == shifts
    assert cx.length - 1 <= m
    assert cx.derived_regularity.value == NEG_INF
    assert all(is_filtered(t) for t in cx.terms)


def test_complex_of_k0():
    cx = filtered_complex(k0())
    assert cx.length == 0
    assert cx.derived_regularity.value == 0
    assert cx.to_json()["homology"][0]["dims"][:2] == [1, 0]


def test_complex_records_homology_checks():
    V = direct_sum(free_module([1], 8, F101, G1), k0(window=8))
    cx = filtered_complex(V)
    assert cx.homology_checks
    assert all(a == b for a, b in cx.homology_checks)
    assert cx.derived_regularity.value == 0


def test_complex_window_demand_examples():
    assert complex_window_demand(NEG_INF, NEG_INF, NEG_INF) == 0
    assert [complex_window_demand(g, NEG_INF, g) for g in range(4)] == [1, 4, 10, 17]
    filtered_complex(free_module([2], 10, F101, G1))
    with pytest.raises(WindowError):
        filtered_complex(free_module([2], 2, F101, G1))   # first shift is 3


@settings(max_examples=8)
@given(trial=st.integers(0, 10_000))
def test_complex_properties(trial):
    P, V = corpus_module(trial, order=1, gmax=2, rmax=2)
    g, t = gd(V, P.bounds), torsion_degree(V, P.bounds)
    rel = max(hd(V, 1, P.bounds).value, g.value)
    need = complex_window_demand(g.value, t.value, rel)
    V = compile_presentation(P, window=max(need, P.window))
    cx = filtered_complex(V, gd_value=g, td_value=t, rel=rel)   # checks d^2 and homology
    if g.value != NEG_INF:
        assert cx.length - 1 <= g.value
    assert cx.levels[0].td.value == t.value
    assert cx.derived_regularity.value >= t.value


# -- growth ---------------------------------------------------------------------------

def test_format_poly():
    assert format_poly([0, -1, 1]) == "X^2 - X"
    assert format_poly([Fraction(1, 2), 0, 3]) == "3*X^2 + 1/2"
    assert format_poly([0, Fraction(-1, 2)]) == "-(1/2)*X"
    assert format_poly([]) == "0"
    assert format_poly([1]) == "1"


@pytest.mark.parametrize("m,poly,start", [(0, "1", 0), (1, "X", 1), (2, "X^2 - X", 3)])
def test_growth_of_free(m, poly, start):
    gr = fit_polynomial(free_module([m], 8, F101, G1))
    assert gr.to_json()["poly"] == poly
    assert gr.stable_from == start
    assert gr.degree == m


def test_growth_of_k0_is_zero():
    gr = fit_polynomial(k0())
    assert gr.poly == [] and gr.stable_from == 1


def test_growth_detects_mismatch():
    # M(1) plus a copy of k in degrees 0..3; claiming no torsion starts the fit too early
    V = direct_sum(free_module([1], 6, F101, G1), module([0], [(4, [(0, (), (), 1)])], window=6))
    assert torsion_degree(V).value == 3
    with pytest.raises(GrowthMismatch):
        fit_polynomial(V, gd(V), torsion_degree(free_module([1], 6, F101, G1)))
    assert fit_polynomial(V).stable_from == 4


@settings(max_examples=15)
@given(trial=st.integers(0, 10_000), order=st.sampled_from([1, 2]))
def test_growth_matches_dims(trial, order):
    P, V = corpus_module(trial, order=order, extra=3)
    g, t = gd(V, P.bounds), torsion_degree(V, P.bounds)
    try:
        gr = fit_polynomial(V, g, t)
    except WindowError:
        return
    for n in range(gr.stable_from, V.window + 1):
        assert gr(n) == V.dims[n]
    if g.value != NEG_INF:
        assert gr.degree <= g.value
