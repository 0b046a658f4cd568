"""The skeletal category FI_G.

Objects are the integers 0, 1, 2, ...; the object ``n`` stands for the set
``[n] = {1, ..., n}``.  A morphism ``m -> n`` is an injection ``[m] -> [n]``
together with a colouring of ``[m]`` by elements of a finite group ``G``.

Composition convention: for ``alpha = (f1, g1): l -> m`` and
``beta = (f2, g2): m -> n`` we set

    beta o alpha = (f2 o f1, i -> g2(f1(i)) * g1(i)).

Group elements are integer indices into a Cayley table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

import numpy as np


class FiniteGroup:
    """A finite group given by its Cayley table.

    ``table[a][b]`` is the index of the product ``a * b``.
    """

    def __init__(self, table, identity=None, check=True):
        table = np.asarray(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise ValueError("Cayley table must be a non-empty square array")
        self.order = int(table.shape[0])
        self.table = table
        self.table.setflags(write=False)
        if identity is None:
            identity = self._find_identity()
        self.identity = int(identity)
        self.inverses = self._find_inverses()
        if check:
            problems = self.check()
            if problems:
                raise ValueError("not a group: " + "; ".join(problems))

    @classmethod
    def trivial(cls):
        return cls([[0]], identity=0)

    @classmethod
    def cyclic(cls, order):
        idx = np.arange(order)
        return cls((idx[:, None] + idx[None, :]) % order, identity=0)

    def _find_identity(self):
        n = self.order
        for e in range(n):
            if all(self.table[e, a] == a and self.table[a, e] == a for a in range(n)):
                return e
        raise ValueError("Cayley table has no two-sided identity")

    def _find_inverses(self):
        inv = []
        for a in range(self.order):
            hits = np.nonzero(self.table[:, a] == self.identity)[0]
            inv.append(int(hits[0]) if hits.size else -1)
        return tuple(inv)

    def check(self):
        """List violated group axioms (empty when the table is a group)."""
        n, t, e = self.order, self.table, self.identity
        problems = []
        if t.min() < 0 or t.max() >= n:
            return ["table entries out of range"]
        # associativity, exhaustively: (ab)c == a(bc)
        left = t[t, :]            # left[a, b, c] = t[t[a, b], c]
        right = t[:, t]           # right[a, b, c] = t[a, t[b, c]]
        if not np.array_equal(left, right):
            problems.append("table is not associative")
        if not (np.all(t[e, :] == np.arange(n)) and np.all(t[:, e] == np.arange(n))):
            problems.append("identity is not a two-sided unit")
        for a, b in enumerate(self.inverses):
            if b < 0 or t[b, a] != e or t[a, b] != e:
                problems.append(f"element {a} has no inverse")
                break
        return problems

    def mul(self, a, b):
        return int(self.table[a, b])

    def inv(self, a):
        return self.inverses[a]

    def __eq__(self, other):
        return (isinstance(other, FiniteGroup) and self.identity == other.identity
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.order, self.identity, self.table.tobytes()))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"

    def to_json(self):
        return {"order": self.order, "table": self.table.tolist(),
                "identity": self.identity}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, int):
            return cls.cyclic(data)
        table = data.get("table")
        if table is None:
            return cls.cyclic(int(data["order"]))
        group = cls(table, identity=data.get("identity"))
        if "order" in data and int(data["order"]) != group.order:
            raise ValueError("group order does not match Cayley table")
        return group


@dataclass(frozen=True, slots=True)
class Morphism:
    """A morphism ``source -> target`` of FI_G.

    ``injection[i]`` is the (1-based) image of ``i + 1`` and ``colors[i]``
    its group colour.
    """

    source: int
    target: int
    injection: tuple
    colors: tuple

    def __post_init__(self):
        m, n = self.source, self.target
        if m < 0 or n < m:
            raise ValueError(f"bad degrees {m} -> {n}")
        if len(self.injection) != m or len(self.colors) != m:
            raise ValueError("injection and colors must have length = source")
        if len(set(self.injection)) != m or any(not 1 <= v <= n for v in self.injection):
            raise ValueError(f"{self.injection} is not an injection [{m}] -> [{n}]")

    def is_invertible(self):
        return self.source == self.target

    def to_json(self):
        return {"source": self.source, "target": self.target,
                "injection": list(self.injection), "colors": list(self.colors)}


# A wreath element is an endomorphism n -> n.
WreathElement = Morphism


def identity(n, group):
    return Morphism(n, n, tuple(range(1, n + 1)), (group.identity,) * n)


def standard_inclusion(n, group):
    """The inclusion ``[n] -> [n+1]``, ``i -> i``, with trivial colours."""
    return Morphism(n, n + 1, tuple(range(1, n + 1)), (group.identity,) * n)


def skip_inclusion(n, k, group):
    """Order-preserving injection ``[n] -> [n+1]`` whose image misses ``k``."""
    inj = tuple(i if i < k else i + 1 for i in range(1, n + 1))
    return Morphism(n, n + 1, inj, (group.identity,) * n)


def shift_inclusion(n, group, a=1):
    """``[n] -> [n+a]``, ``i -> i + a``: the component of the natural map V -> Sigma_a V."""
    return Morphism(n, n + a, tuple(range(1 + a, n + a + 1)), (group.identity,) * n)


def compose(beta, alpha, group):
    """``beta o alpha``; ``alpha`` is applied first."""
    if alpha.target != beta.source:
        raise ValueError(f"cannot compose {alpha.source}->{alpha.target} "
                         f"with {beta.source}->{beta.target}")
    inj = tuple(beta.injection[j - 1] for j in alpha.injection)
    t = group.table
    cols = tuple(int(t[beta.colors[j - 1], c])
                 for j, c in zip(alpha.injection, alpha.colors))
    return Morphism(alpha.source, beta.target, inj, cols)


def hom_size(m, n, group_order):
    if m > n or m < 0:
        return 0
    return comb(n, m) * factorial(m) * group_order ** m


@lru_cache(maxsize=None)
def _hom_raw(m, n, group_order):
    # Cached by group order only: the enumeration never consults the table.
    injections = list(itertools.permutations(range(1, n + 1), m))
    colourings = list(itertools.product(range(group_order), repeat=m))
    return tuple((inj, col) for inj in injections for col in colourings)


def hom_set(m, n, group):
    """All morphisms ``m -> n``, lexicographically ordered on (injection, colors)."""
    m, n = int(m), int(n)
    if m > n or m < 0:
        return []
    return [Morphism(m, n, inj, col) for inj, col in _hom_raw(m, n, group.order)]


@lru_cache(maxsize=None)
def hom_index(m, n, group_order):
    """Map ``(injection, colors) -> position`` in the canonical hom-set order."""
    return {key: i for i, key in enumerate(_hom_raw(m, n, group_order))}


@lru_cache(maxsize=None)
def hom_arrays(m, n, group_order):
    """Injections and colourings of ``C(m, n)`` as integer arrays, in hom-set order."""
    raw = _hom_raw(m, n, group_order)
    inj = np.array([r[0] for r in raw], dtype=np.int64).reshape(len(raw), m)
    col = np.array([r[1] for r in raw], dtype=np.int64).reshape(len(raw), m)
    inj.setflags(write=False)
    col.setflags(write=False)
    return inj, col


@lru_cache(maxsize=None)
def _injection_codes(m, n):
    perms = np.array(list(itertools.permutations(range(1, n + 1), m)), dtype=np.int64)
    return perms.reshape(-1, m) @ (n + 1) ** np.arange(m - 1, -1, -1, dtype=np.int64)


def hom_positions(m, n, group_order, inj, col):
    """Vectorised ``hom_index``: positions of the rows ``(inj[k], col[k])``."""
    inj = np.asarray(inj, dtype=np.int64)
    col = np.asarray(col, dtype=np.int64)
    if m == 0:
        return np.zeros(inj.shape[:-1], dtype=np.int64)
    code = inj @ (n + 1) ** np.arange(m - 1, -1, -1, dtype=np.int64)
    rank = np.searchsorted(_injection_codes(m, n), code)
    ccode = col @ group_order ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return rank * group_order ** m + ccode


@lru_cache(maxsize=64)
def product_table(n, group):
    """``T[x, y]`` = position of ``g_x o g_y`` in G_n."""
    inj, col = hom_arrays(n, n, group.order)
    N = len(inj)
    if n == 0:
        return np.zeros((N, N), dtype=np.int64)
    pinj = inj[:, inj - 1]                    # [x, y, i] = inj[x, inj[y, i] - 1]
    pcol = group.table[col[:, inj - 1], col[None, :, :]]
    T = hom_positions(n, n, group.order, pinj, pcol)
    T.setflags(write=False)
    return T


@lru_cache(maxsize=None)
def left_action(token, n, group):
    """Positions of ``x o g`` for every ``g`` in G_n, where ``x`` is a generator token."""
    inj, col = hom_arrays(n, n, group.order)
    x = generator_morphism(token, n, group)
    xi = np.array(x.injection, dtype=np.int64)
    xc = np.array(x.colors, dtype=np.int64)
    out = hom_positions(n, n, group.order, xi[inj - 1], group.table[xc[inj - 1], col])
    out.setflags(write=False)
    return out


def wreath_order(n, group_order):
    return factorial(n) * group_order ** n


def canonical_factor(alpha, group):
    """Return ``tau`` in G_n with ``alpha = tau o iota_{n-1} o ... o iota_m``.

    ``tau`` agrees with ``alpha`` on ``[m]`` and sends ``m+1, ..., n`` to the
    complement of the image in increasing order, with trivial colours.
    """
    m, n = alpha.source, alpha.target
    image = set(alpha.injection)
    rest = tuple(v for v in range(1, n + 1) if v not in image)
    return Morphism(n, n, alpha.injection + rest,
                    alpha.colors + (group.identity,) * (n - m))


def inclusion_chain(m, n, group):
    """The composite ``iota_{n-1} o ... o iota_m: [m] -> [n]``."""
    return Morphism(m, n, tuple(range(1, m + 1)), (group.identity,) * m)


# -- words in the generators of G_n ----------------------------------------
#
# G_n is generated by the adjacent transpositions s_1..s_{n-1} (tokens
# ("s", i)) and the colour insertions c_g on coordinate 1 (tokens ("c", g)).
# A word is a list of tokens in the order they act on a vector, i.e. the
# first token is the right-most factor.

def transposition_word(perm):
    """Word for the permutation ``i -> perm[i-1]`` (trivial colours)."""
    arr = list(perm)
    swaps = []
    # bubble sort by position swaps: perm o s_{j1} o ... o s_{jk} = id
    changed = True
    while changed:
        changed = False
        for j in range(len(arr) - 1):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                swaps.append(j + 1)
                changed = True
    # perm = s_{jk} o ... o s_{j1}: s_{j1} acts first
    return [("s", j) for j in swaps]


def color_at_word(g, position):
    """Word for the colour ``g`` placed on ``position`` (1-based)."""
    down = [("s", j) for j in range(position - 1, 0, -1)]   # w^{-1}: s_{i-1} first
    up = [("s", j) for j in range(1, position)]             # w: s_1 first
    return down + [("c", g)] + up


def element_word(tau, group):
    """Word for a wreath element ``tau`` in G_n."""
    if tau.source != tau.target:
        raise ValueError("not an endomorphism")
    word = []
    for pos, g in enumerate(tau.colors, start=1):
        if g != group.identity:
            word.extend(color_at_word(g, pos))
    word.extend(transposition_word(tau.injection))
    return word


def generator_morphism(token, n, group):
    """The wreath element denoted by a single token, in G_n."""
    e = group.identity
    if token[0] == "s":
        i = token[1]
        inj = list(range(1, n + 1))
        inj[i - 1], inj[i] = inj[i], inj[i - 1]
        return Morphism(n, n, tuple(inj), (e,) * n)
    cols = [e] * n
    cols[0] = token[1]
    return Morphism(n, n, tuple(range(1, n + 1)), tuple(cols))


def evaluate_word(word, n, group):
    """Multiply out a word, as a check on ``element_word``."""
    result = identity(n, group)
    for token in word:
        result = compose(generator_morphism(token, n, group), result, group)
    return result
