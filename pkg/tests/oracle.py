"""Slow, independent reference computations for the test suite.

Nothing here imports the package's linear algebra or category code.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial


def rank(rows, p=None):
    """Rank of a list-of-lists matrix over F_p, or over Q when ``p`` is None."""
    if p is None:
        M = [[Fraction(x) for x in r] for r in rows]
    else:
        M = [[int(x) % p for x in r] for r in rows]
    if not M:
        return 0
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c] if p is None else pow(M[r][c], -1, p)
        M[r] = [x * inv if p is None else x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b if p is None else (a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
    return r


def hom(m, n, order):
    """All (injection, colours) pairs for [m] -> [n], images 1-based."""
    return [(inj, cols)
            for inj in itertools.permutations(range(1, n + 1), m)
            for cols in itertools.product(range(order), repeat=m)]


def hom_size(m, n, order):
    return comb(n, m) * factorial(m) * order ** m if m <= n else 0


def compose(beta, alpha, table):
    """beta o alpha; colour at i is g_beta(f_alpha(i)) * g_alpha(i)."""
    bi, bc = beta
    ai, ac = alpha
    inj = tuple(bi[a - 1] for a in ai)
    cols = tuple(table[bc[a - 1]][g] for a, g in zip(ai, ac))
    return inj, cols


def presented_dims(generators, relations, window, order, table, p=None):
    """dim (F / U)_n by spanning every translate of every relation.

    ``relations`` holds ``(degree, [(gen, injection, colours, coeff), ...])``.
    """
    out = []
    for n in range(window + 1):
        basis = {}
        for i, d in enumerate(generators):
            for a in hom(d, n, order):
                basis[(i, a)] = len(basis)
        vecs = []
        for deg, terms in relations:
            for beta in hom(deg, n, order):
                v = [0] * len(basis)
                for gen, inj, cols, coeff in terms:
                    key = (gen, compose(beta, (tuple(inj), tuple(cols)), table))
                    v[basis[key]] += coeff
                vecs.append(v)
        out.append(len(basis) - (rank(vecs, p) if vecs and basis else 0))
    return out
