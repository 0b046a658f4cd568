import itertools

import pytest
from hypothesis import given, settings, strategies as st

from fihom import oracles
from fihom.category import Morphism
from fihom.homology import h0_dims
from fihom.modules import compile_presentation
from fihom.shift import socle_dims

import oracle
from helpers import F101, QQ, corpus_module, group, k0, module

G1 = group(1)


def test_oracle_examples():
    V = k0(window=4)
    assert oracles.h0_dims(V) == [1, 0, 0, 0, 0]
    assert oracles.socle_dims(V) == [1, 0, 0, 0]
    M = module([1], window=4)
    assert oracles.h0_dims(M) == [0, 1, 0, 0, 0]
    assert oracles.socle_dims(M) == [0, 0, 0, 0]


def test_oracle_refuses_out_of_scope():
    with pytest.raises(ValueError):
        oracles.h0_dims(k0(window=4, order=2))
    with pytest.raises(ValueError):
        oracles.h0_dims(k0(window=oracles.MAX_WINDOW + 1))


@pytest.mark.parametrize("field", [F101, QQ])
def test_injection_matrices_match_engine(field):
    V = module([1, 2], [(2, [(0, (2,), (0,), 1), (1, (2, 1), (0, 0), 2)])], field=field, window=4)
    for m, n in [(1, 2), (1, 3), (2, 4), (0, 3)]:
        for inj in itertools.permutations(range(1, n + 1), m):
            a = Morphism(m, n, inj, (0,) * m)
            eng = V.apply_morphism_matrix(a, field.eye(V.dims[m]))
            assert field.equal(oracles.injection_matrix(V, m, n, inj), eng)


def test_injection_matrices_compose():
    V = module([1], [(3, [(0, (1,), (0,), 1), (0, (3,), (0,), -1)])], window=4)
    F = V.field
    for a_inj in itertools.permutations(range(1, 3), 1):
        for b_inj in itertools.permutations(range(1, 4), 2):
            ab = tuple(b_inj[i - 1] for i in a_inj)
            lhs = oracles.injection_matrix(V, 1, 3, ab)
            rhs = F.matmul(oracles.injection_matrix(V, 2, 3, b_inj),
                           oracles.injection_matrix(V, 1, 2, a_inj))
            assert F.equal(lhs, rhs)


@settings(max_examples=20)
@given(trial=st.integers(0, 10_000))
def test_bruteforce_agrees_with_engine(trial):
    P, V = corpus_module(trial, order=1)
    Vr = V.restrict(min(V.window, 5))
    assert oracles.h0_dims(Vr) == h0_dims(Vr)
    assert oracles.socle_dims(Vr) == socle_dims(Vr)


@settings(max_examples=15)
@given(trial=st.integers(0, 10_000))
def test_engine_dims_match_span_oracle(trial):
    """Dimensions of a compiled presentation against spanning every relation translate."""
    P, _ = corpus_module(trial, order=1, gmax=2, rmax=3)
    V = compile_presentation(P, window=4)
    rels = [(r.degree, [(g, a.injection, a.colors, int(c)) for g, a, c in r.terms])
            for r in P.relations]
    assert V.dims == oracle.presented_dims(P.generators, rels, 4, 1, G1.table, 101)

