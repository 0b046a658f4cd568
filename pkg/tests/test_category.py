import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fihom import category as cat
from fihom.category import FiniteGroup, Morphism

from oracle import compose as oracle_compose, hom as oracle_hom, hom_size as oracle_hom_size

TRIV = FiniteGroup.trivial()
C2 = FiniteGroup.cyclic(2)
C3 = FiniteGroup.cyclic(3)
S3 = FiniteGroup([[0, 1, 2, 3, 4, 5], [1, 0, 3, 2, 5, 4], [2, 4, 0, 5, 1, 3],
                  [3, 5, 1, 4, 0, 2], [4, 2, 5, 0, 3, 1], [5, 3, 4, 1, 2, 0]], identity=0)


def test_group_tables_valid():
    for G in (TRIV, C2, C3, S3):
        assert G.check() == []
        assert all(G.mul(G.inv(g), g) == G.identity for g in range(G.order))


def test_group_rejects_non_associative_table():
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1, 2], [1, 0, 0], [2, 2, 1]], identity=0)


@pytest.mark.parametrize("m,n,G,size", [(0, 5, TRIV, 1), (1, 3, TRIV, 3), (2, 4, C2, 48)])
def test_hom_set_sizes(m, n, G, size):
    assert len(cat.hom_set(m, n, G)) == size


def test_hom_set_empty_when_m_exceeds_n():
    assert cat.hom_set(3, 2, TRIV) == []


@pytest.mark.parametrize("order", [1, 2])
def test_hom_set_exhaustive_counts(order):
    G = FiniteGroup.cyclic(order)
    for n in range(7):
        for m in range(n + 1):
            hs = cat.hom_set(m, n, G)
            assert len(hs) == oracle_hom_size(m, n, order)
            assert len(hs) * cat.wreath_order(n - m, order) == cat.wreath_order(n, order)
            keys = [(a.injection, a.colors) for a in hs]
            assert keys == sorted(keys) == oracle_hom(m, n, order)


def test_morphism_rejects_bad_data():
    with pytest.raises(ValueError):
        Morphism(2, 3, (1, 1), (0, 0))
    with pytest.raises(ValueError):
        Morphism(2, 3, (1, 4), (0, 0))
    with pytest.raises(ValueError):
        Morphism(2, 3, (1, 2), (0,))


def test_compose_hand_example():
    beta = Morphism(2, 3, (2, 3), (0, 0))
    alpha = Morphism(1, 2, (2,), (0,))
    assert cat.compose(beta, alpha, TRIV) == Morphism(1, 3, (3,), (0,))


def test_compose_mismatch_raises():
    with pytest.raises(ValueError):
        cat.compose(cat.identity(3, TRIV), cat.identity(2, TRIV), TRIV)


@pytest.mark.parametrize("G", [TRIV, C2, S3], ids=["1", "C2", "S3"])
def test_compose_matches_oracle_and_colour_convention(G):
    for a in cat.hom_set(1, 2, G):
        for b in cat.hom_set(2, 3, G):
            got = cat.compose(b, a, G)
            assert (got.injection, got.colors) == oracle_compose(
                (b.injection, b.colors), (a.injection, a.colors), G.table.tolist())


def test_composition_associative_and_unital_exhaustive():
    G = TRIV
    for m, n, p, q in itertools.combinations_with_replacement(range(4), 4):
        for a in cat.hom_set(m, n, G):
            assert cat.compose(cat.identity(n, G), a, G) == a
            assert cat.compose(a, cat.identity(m, G), G) == a
            for b in cat.hom_set(n, p, G):
                ba = cat.compose(b, a, G)
                for c in cat.hom_set(p, q, G):
                    assert cat.compose(c, ba, G) == cat.compose(cat.compose(c, b, G), a, G)


def test_associativity_nonabelian_colours():
    G = S3
    for a in cat.hom_set(1, 2, G)[:12]:
        for b in cat.hom_set(2, 2, G)[::5]:
            for c in cat.hom_set(2, 3, G)[::17]:
                assert cat.compose(c, cat.compose(b, a, G), G) == \
                    cat.compose(cat.compose(c, b, G), a, G)


def test_canonical_factor_examples():
    assert cat.canonical_factor(cat.identity(3, TRIV), TRIV) == cat.identity(3, TRIV)
    tau = cat.canonical_factor(Morphism(1, 2, (2,), (0,)), TRIV)
    assert tau == Morphism(2, 2, (2, 1), (0, 0))


@pytest.mark.parametrize("G", [TRIV, C2], ids=["1", "C2"])
def test_canonical_factor_reproduces_every_morphism(G):
    for n in range(5):
        for m in range(n + 1):
            for alpha in cat.hom_set(m, n, G):
                tau = cat.canonical_factor(alpha, G)
                assert tau.source == tau.target == n
                assert cat.compose(tau, cat.inclusion_chain(m, n, G), G) == alpha


def test_transitivity_on_one_point_extensions():
    for G in (TRIV, C2):
        for n in range(4):
            group = cat.hom_set(n + 1, n + 1, G)
            for alpha in cat.hom_set(n, n + 1, G):
                orbit = {cat.compose(t, alpha, G) for t in group}
                assert orbit == set(cat.hom_set(n, n + 1, G))


@pytest.mark.parametrize("G", [TRIV, C2, S3], ids=["1", "C2", "S3"])
def test_element_words_evaluate_back(G):
    for n in range(4):
        for tau in cat.hom_set(n, n, G):
            assert cat.evaluate_word(cat.element_word(tau, G), n, G) == tau


@pytest.mark.parametrize("G", [TRIV, C2, C3], ids=["1", "C2", "C3"])
def test_vectorised_tables_match_scalar_composition(G):
    for n in range(4):
        els = cat.hom_set(n, n, G)
        T = cat.product_table(n, G)
        idx = cat.hom_index(n, n, G.order)
        for x, gx in enumerate(els):
            for y, gy in enumerate(els):
                c = cat.compose(gx, gy, G)
                assert T[x, y] == idx[(c.injection, c.colors)]
        tokens = [("s", i) for i in range(1, n)] + ([("c", g) for g in range(G.order)] if n else [])
        for tok in tokens:
            x = cat.generator_morphism(tok, n, G)
            got = cat.left_action(tok, n, G)
            want = [idx[(c.injection, c.colors)] for c in (cat.compose(x, g, G) for g in els)]
            assert list(got) == want


@given(m=st.integers(0, 3), extra=st.integers(0, 3), order=st.integers(1, 3), data=st.data())
def test_hom_positions_inverts_enumeration(m, extra, order, data):
    n = m + extra
    hs = cat.hom_set(m, n, FiniteGroup.cyclic(order))
    k = data.draw(st.integers(0, len(hs) - 1))
    inj = np.array([hs[k].injection], dtype=np.int64).reshape(1, m)
    col = np.array([hs[k].colors], dtype=np.int64).reshape(1, m)
    assert int(cat.hom_positions(m, n, order, inj, col)[0]) == k


def test_group_json_round_trip():
    for G in (TRIV, C3, S3):
        assert FiniteGroup.from_json(G.to_json()) == G
