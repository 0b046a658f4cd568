"""Brute-force recomputation of H_0 and the socle for FI-modules (G trivial).

Every morphism of every hom-set is enumerated and its action is built
directly from the structure maps, so nothing here relies on face maps,
canonical factorisations or the Koszul complex.
"""

from __future__ import annotations

import itertools

import numpy as np

from .linalg import rank

MAX_WINDOW = 6


def _perm_matrix(V, n, perm):
    """``rho(perm)`` for a permutation of ``[n]`` given as a tuple of images (1-based)."""
    F = V.field
    M = F.eye(V.dims[n])
    p = list(perm)
    # selection sort on the one-line notation; each swap of neighbours at
    # positions (j, j+1) is right multiplication by s_j
    word = []
    for target in range(1, n + 1):
        j = p.index(target)
        while j > target - 1:
            p[j - 1], p[j] = p[j], p[j - 1]
            word.append(j)
            j -= 1
    # perm o s_{w_1} o ... o s_{w_k} = id, so perm = s_{w_k} o ... o s_{w_1}
    for j in reversed(word):
        M = F.matmul(M, V.s_matrix(n, j))
    return M


def injection_matrix(V, m, n, inj):
    """``V(alpha)`` for ``alpha: [m] -> [n]`` given by its images."""
    F = V.field
    X = F.eye(V.dims[m])
    for d in range(m, n):
        X = F.matmul(V.phi(d), X)
    rest = [v for v in range(1, n + 1) if v not in inj]
    perm = tuple(inj) + tuple(rest)      # extends alpha; i -> perm[i-1]
    return F.matmul(_perm_matrix(V, n, perm), X)


def _check(V):
    if V.group.order != 1:
        raise ValueError("the brute-force oracle handles the trivial group only")
    if V.window > MAX_WINDOW:
        raise ValueError(f"window {V.window} exceeds the oracle limit {MAX_WINDOW}")


def h0_dims(V):
    """``dim V_n - dim span{V(alpha) V_m : m < n, alpha: [m] -> [n]}``."""
    _check(V)
    F = V.field
    out = []
    for n in range(V.window + 1):
        blocks = [injection_matrix(V, m, n, inj)
                  for m in range(n)
                  for inj in itertools.permutations(range(1, n + 1), m)
                  if V.dims[m]]
        if blocks and V.dims[n]:
            out.append(V.dims[n] - rank(np.concatenate(blocks, axis=1), F))
        else:
            out.append(V.dims[n])
    return out


def socle_dims(V):
    """``dim {v in V_n : V(alpha) v = 0 for all alpha: [n] -> [n+1]}``."""
    _check(V)
    F = V.field
    out = []
    for n in range(V.window):
        if not V.dims[n]:
            out.append(0)
            continue
        rows = [injection_matrix(V, n, n + 1, inj)
                for inj in itertools.permutations(range(1, n + 2), n)]
        out.append(V.dims[n] - rank(np.concatenate(rows, axis=0), F))
    return out
