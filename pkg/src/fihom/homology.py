"""FI_G-homology ``H_s(V) = Tor_s(C_0, V)`` and the invariants built from it.

Two independent routes compute Tor:

* ``method="koszul"`` takes homology of ``K (x) V`` where ``K`` is the linear
  free resolution of ``C_0``.  Degree ``n`` of the complex is
  ``sum over p-subsets T of [n] of V_{[n] \\ T}`` with face-map differentials;
  its size is ``binom(n, p) dim V_{n-p}``.
* ``method="resolution"`` resolves ``V`` by free modules and takes homology
  of ``C_0 (x) P``, i.e. ``k[G_n]^{#generators in degree n}`` with the
  invertible components of the differentials acting by right multiplication.

Window certification uses ``hd_1 <= r`` and ``hd_s <= gd + hd_1 + s - 1``:
with presentation bounds ``g, r`` the values ``gd``, ``td`` and
``hd_1..hd_s`` are final once the window reaches ``g + r + s - 1`` (and
``g + r`` for ``td``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from math import comb, inf

import numpy as np

from . import category as cat
from .degree import NEG_INF, DegreeValue, encode, top_degree
from .linalg import quotient_by_span, rank, subspace_of_kernel
from .modules import (Bounds, DegreewiseModule, FreeModule, ModuleMap, SpanBuilder,
                      WindowError, _tokens, map_kernel, saturate)
from .shift import torsion_degree


class CertificateError(WindowError):
    """The window is too small to certify the requested invariant."""


# -- H_0 -----------------------------------------------------------------------

def j_span(V, n):
    """Builder holding ``(JV)_n``, the image of all morphisms ``n-1 -> n``."""
    b = SpanBuilder(V.field, V.dims[n])
    if n >= 1 and V.dims[n - 1]:
        I = V.field.eye(V.dims[n - 1])
        for Y in V.apply_faces(n - 1, I):
            b.add_columns(Y)
            if b.dim == b.d:
                break
    return b


def h0(V):
    """``H_0(V) = V / JV`` with the induced G_n actions and zero structure maps."""
    F = V.field
    quots = [j_span(V, n).quotient() for n in range(V.window + 1)]
    s, c, phi = [], [], []
    for n, Q in enumerate(quots):
        L = Q.lift(F)
        s.append([F.matmul(Q.proj, V.act(n, ("s", i), L)) for i in range(1, n)])
        c.append([F.matmul(Q.proj, V.act(n, ("c", g), L)) for g in range(V.group.order)]
                 if n >= 1 else [])
        if n < V.window:
            phi.append(F.zeros(quots[n + 1].dim, Q.dim))
    return DegreewiseModule(F, V.group, [q.dim for q in quots], s, c, phi, label="H0")


def h0_dims(V):
    return [V.dims[n] - j_span(V, n).dim for n in range(V.window + 1)]


def gd(V, bounds=None):
    """Generating degree: top nonzero degree of ``H_0(V)``."""
    bounds = bounds if bounds is not None else V.bounds
    value = top_degree(h0_dims(V))
    certified = bounds is not None and V.window >= bounds.gen
    return DegreeValue(value, certified)


# -- the Koszul route ----------------------------------------------------------

def _subsets(n, p):
    return list(itertools.combinations(range(1, n + 1), p))


def koszul_term_dim(V, n, p):
    if p < 0 or p > n:
        return 0
    return comb(n, p) * V.dims[n - p]


def koszul_differential(V, n, p):
    """``d_p: (K_p V)_n -> (K_{p-1} V)_n`` as a dense matrix."""
    F = V.field
    if p < 1 or p > n:
        return F.zeros(koszul_term_dim(V, n, p - 1), koszul_term_dim(V, n, p))
    src, dst = _subsets(n, p), _subsets(n, p - 1)
    a, b = V.dims[n - p], V.dims[n - p + 1]
    D = F.zeros(len(dst) * b, len(src) * a)
    if a == 0 or b == 0:
        return D
    dst_index = {T: i for i, T in enumerate(dst)}
    faces = V.face_maps(n - p)
    for col, T in enumerate(src):
        for j, t in enumerate(T):
            row = dst_index[T[:j] + T[j + 1:]]
            k = t - j          # rank of t inside [n] minus the remaining subset
            E = faces[k - 1]
            D[row * b:(row + 1) * b, col * a:(col + 1) * a] = E if j % 2 == 0 else F.neg(E)
    return D


def koszul_action(V, n, p, token):
    """Action of a generator of G_n on ``(K_p V)_n``."""
    F = V.field
    if p < 0 or p > n:
        return F.zeros(0, 0)
    subs = _subsets(n, p)
    a = V.dims[n - p]
    index = {T: i for i, T in enumerate(subs)}
    A = F.zeros(len(subs) * a, len(subs) * a)
    I = F.eye(a)
    for col, T in enumerate(subs):
        blk = slice(col * a, (col + 1) * a)
        if token[0] == "s":
            i = token[1]
            ins, ins1 = i in T, (i + 1) in T
            if ins and ins1:
                A[blk, blk] = F.neg(I)
            elif not ins and not ins1:
                k = i - sum(1 for t in T if t < i)
                A[blk, blk] = V.act(n - p, ("s", k), I)
            else:
                swapped = tuple(sorted(i + 1 if t == i else i if t == i + 1 else t for t in T))
                row = index[swapped]
                A[row * a:(row + 1) * a, blk] = I
        else:
            A[blk, blk] = I if 1 in T else V.act(n - p, token, I)
    return A


def _koszul_rank(V, n, p):
    cache = V.__dict__.setdefault("_koszul_ranks", {})
    if (n, p) not in cache:
        if p < 1 or p > n or not koszul_term_dim(V, n, p) or not koszul_term_dim(V, n, p - 1):
            cache[(n, p)] = 0
        else:
            cache[(n, p)] = rank(koszul_differential(V, n, p), V.field)
    return cache[(n, p)]


def koszul_homology_dims(V, s, upto=None):
    """``dim H_s(V)_n`` for ``n = 0..upto`` via the Koszul complex."""
    N = V.window if upto is None else min(upto, V.window)
    out = []
    for n in range(N + 1):
        dim = koszul_term_dim(V, n, s)
        if dim:
            dim -= _koszul_rank(V, n, s) + _koszul_rank(V, n, s + 1)
        out.append(dim)
    return out


def homology_space(d_in, d_out, actions, field):
    """``ker d_out / im d_in`` with the induced action matrices."""
    F = field
    Z = subspace_of_kernel(d_out, F)
    B = Z.coords(d_in) if d_in.shape[1] else F.zeros(Z.dim, 0)
    Q = quotient_by_span(B, F)
    L = F.matmul(Z.basis, Q.lift(F))
    induced = [F.matmul(Q.proj, Z.coords(F.matmul(A, L))) for A in actions]
    return Q.dim, induced


# -- free covers and resolutions --------------------------------------------------

def _orbit_columns(V, d, v):
    """Columns ``rho(g) v`` for ``g`` in G_d, in hom-set order (breadth-first)."""
    G, F = V.group, V.field
    order = cat.wreath_order(d, G.order)
    out = F.zeros(V.dims[d], order)
    done = np.zeros(order, dtype=bool)
    start = cat.hom_positions(d, d, G.order, np.arange(1, d + 1), np.full(d, G.identity))
    start = int(start)
    out[:, start] = v
    done[start] = True
    frontier = np.array([start])
    tokens = _tokens(d, G)
    while frontier.size:
        nxt = []
        for tok in tokens:
            targets = cat.left_action(tok, d, G)[frontier]
            fresh = ~done[targets]
            if not fresh.any():
                continue
            targets, src = np.unique(targets[fresh], return_index=True)
            cols = frontier[fresh][src]
            out[:, targets] = V.act(d, tok, out[:, cols])
            done[targets] = True
            nxt.append(targets)
        frontier = np.concatenate(nxt) if nxt else np.zeros(0, dtype=np.int64)
    return out


def free_map(V, generators, window=None):
    """``(F, f)``: the free module on ``generators`` and the map sending them to vectors.

    ``generators`` is a list of ``(degree, vector in V_degree)``.
    """
    N = V.window if window is None else window
    G = V.group
    Fd = V.field
    degrees = [d for d, _ in generators]
    P = FreeModule(Fd, G, degrees, N)
    mats = []
    per_gen = [None] * len(generators)
    for n in range(N + 1):
        blocks = []
        for j, (d, v) in enumerate(generators):
            if n < d:
                continue
            if n == d:
                X = _orbit_columns(V, d, v)
            else:
                prev = per_gen[j]
                inj, col = cat.hom_arrays(d, n, G.order)
                X = Fd.zeros(V.dims[n], len(inj))
                # alpha = (skip the largest point k outside its image) o beta
                missing = np.ones((len(inj), n + 1), dtype=bool)
                np.put_along_axis(missing, inj, False, axis=1)
                missing[:, 0] = False
                k = n - np.argmax(missing[:, ::-1], axis=1)
                beta = inj - (inj > k[:, None])
                src = cat.hom_positions(d, n - 1, G.order, beta, col)
                faces = V.face_maps(n - 1)
                for kk in np.unique(k):
                    sel = np.flatnonzero(k == kk)
                    X[:, sel] = Fd.matmul(faces[kk - 1], prev[:, src[sel]])
            per_gen[j] = X
            blocks.append(X)
        mats.append(np.concatenate(blocks, axis=1) if blocks else Fd.zeros(V.dims[n], 0))
    return P, ModuleMap(P, V, mats)


def cover_generators(V, upto=None, redundant=False):
    """Greedy generators: lifts of ``H_0`` basis vectors, kept only when they
    enlarge ``JV_n + kG_n (chosen so far)``."""
    F = V.field
    N = V.window if upto is None else upto
    gens = []
    for n in range(N + 1):
        b = j_span(V, n)
        keep = b.quotient().keep
        for q in keep:
            e = F.zeros(V.dims[n], 1)
            e[q, 0] = F.one()
            new = b.add_columns(e)
            if new.shape[1]:
                gens.append((n, e[:, 0]))
                saturate(V, n, b, new)
            if b.dim == b.d:
                break
    if redundant and gens:
        gens.append(gens[0])
    return gens


def free_cover(V, bounds=None, redundant=False, allow_uncertified=False):
    """``(F, cover)``: a free module surjecting onto ``V`` on the window."""
    bounds = bounds if bounds is not None else V.bounds
    if not allow_uncertified and (bounds is None or V.window < bounds.gen):
        need = None if bounds is None else bounds.gen
        raise CertificateError(f"generating degree not certified on window {V.window}",
                               required=need, available=V.window)
    return free_map(V, cover_generators(V, redundant=redundant))


@dataclass
class FreeResolution:
    terms: list                 # FreeModules P_0, P_1, ...
    differentials: list         # d_s: P_s -> P_{s-1} for s >= 1 (index s)
    augmentation: ModuleMap     # P_0 -> V
    window: int
    certified: bool = True

    @property
    def length(self):
        return len(self.terms) - 1

    def generator_degrees(self, s):
        return list(self.terms[s].degrees)


def free_resolution(V, s_max, bounds=None, redundant=False, allow_uncertified=False):
    """Free resolution ``P_{s_max+1} -> ... -> P_0 -> V``, exact on the window."""
    bounds = bounds if bounds is not None else V.bounds
    need = _resolution_window(bounds, s_max)
    certified = need is not None and V.window >= need
    if not certified and not allow_uncertified:
        raise CertificateError(f"resolution to length {s_max} needs window >= {need}",
                               required=need, available=V.window)
    P0, eps = free_cover(V, bounds, redundant=redundant, allow_uncertified=True)
    terms, diffs = [P0], [None]
    K, incl = map_kernel(eps)
    for s in range(1, s_max + 2):
        if K.is_zero():
            P = FreeModule(V.field, V.group, [], V.window)
            terms.append(P)
            diffs.append(ModuleMap(P, terms[-2], [V.field.zeros(terms[-2].dims[n], 0)
                                                  for n in range(V.window + 1)]))
            continue
        P, cover = free_map(K, cover_generators(K, redundant=redundant))
        d = ModuleMap(P, terms[-1], [K.field.matmul(incl.mats[n], cover.mats[n])
                                     for n in range(V.window + 1)])
        terms.append(P)
        diffs.append(d)
        K, incl_k = map_kernel(cover)
        incl = incl_k
    return FreeResolution(terms, diffs, eps, V.window, certified)


def _resolution_window(bounds, s):
    if bounds is None:
        return None
    need = max(bounds.gen, bounds.gen + bounds.rel, bounds.gen + bounds.rel + s - 1)
    return 0 if need == NEG_INF else int(need)


def c0_tensor(res, s, n):
    """Matrix of ``C_0 (x) d_s`` at degree ``n``; rows/cols indexed by (generator, g in G_n)."""
    G = res.terms[0].group
    F = res.terms[0].field
    order = cat.wreath_order(n, G.order)
    if s < 1 or s >= len(res.terms):
        a = _gens_in_degree(res, s, n)
        b = _gens_in_degree(res, s - 1, n)
        return F.zeros(b * order, a * order)
    P, Q = res.terms[s], res.terms[s - 1]
    src = [j for j, d in enumerate(P.degrees) if d == n]
    dst = [i for i, d in enumerate(Q.degrees) if d == n]
    dst_pos = {i: r for r, i in enumerate(dst)}
    D = F.zeros(len(dst) * order, len(src) * order)
    if not src or not dst:
        return D
    M = res.differentials[s].mats[n]
    ident = int(cat.hom_positions(n, n, G.order, np.arange(1, n + 1), np.full(n, G.identity)))
    prod = cat.product_table(n, G)
    for cpos, j in enumerate(src):
        col = M[:, P.offsets[n][j] + ident]
        for i in dst:
            base = Q.offsets[n][i]
            coeffs = col[base:base + order]
            nz = np.flatnonzero(coeffs != 0)
            r0 = dst_pos[i] * order
            for y in nz:
                rows = r0 + prod[:, y]
                cols = cpos * order + np.arange(order)
                D[rows, cols] = F.add(D[rows, cols], np.full(order, coeffs[y], dtype=D.dtype))
    return D


def _gens_in_degree(res, s, n):
    if s < 0 or s >= len(res.terms):
        return 0
    return sum(1 for d in res.terms[s].degrees if d == n)


def resolution_homology_dims(res, s, upto=None):
    N = res.window if upto is None else min(upto, res.window)
    F = res.terms[0].field
    G = res.terms[0].group
    out = []
    for n in range(N + 1):
        a = _gens_in_degree(res, s, n)
        if a == 0:
            out.append(0)
            continue
        order = cat.wreath_order(n, G.order)
        r_out = rank(c0_tensor(res, s, n), F) if s >= 1 else 0
        r_in = rank(c0_tensor(res, s + 1, n), F) if s + 1 < len(res.terms) else 0
        out.append(a * order - r_out - r_in)
    return out


# -- Tor as a module ----------------------------------------------------------------

def tor(V, s, method="koszul", upto=None, resolution=None):
    """``H_s(V)`` as a module with zero structure maps (on degrees ``0..upto``)."""
    F, G = V.field, V.group
    N = V.window if upto is None else min(upto, V.window)
    if method == "resolution" and resolution is None:
        resolution = free_resolution(V, s, allow_uncertified=True)
    dims, s_mats, c_mats = [], [], []
    for n in range(N + 1):
        toks = _tokens(n, G)
        if method == "koszul":
            d_out = koszul_differential(V, n, s)
            d_in = koszul_differential(V, n, s + 1)
            acts = [koszul_action(V, n, s, t) for t in toks]
        elif method == "resolution":
            d_out = c0_tensor(resolution, s, n)
            d_in = c0_tensor(resolution, s + 1, n)
            acts = [_left_mult(resolution, s, n, t) for t in toks]
        else:
            raise ValueError(f"unknown method {method!r}")
        dim, induced = homology_space(d_in, d_out, acts, F)
        dims.append(dim)
        got = dict(zip(toks, induced))
        s_mats.append([got[("s", i)] for i in range(1, n)])
        c_mats.append([got[("c", g)] for g in range(G.order)] if n >= 1 else [])
    phi = [F.zeros(dims[n + 1], dims[n]) for n in range(N)]
    return DegreewiseModule(F, G, dims, s_mats, c_mats, phi, label=f"H{s}")


def _left_mult(res, s, n, token):
    G, F = res.terms[0].group, res.terms[0].field
    a = _gens_in_degree(res, s, n)
    perm = cat.left_action(token, n, G)
    order = len(perm)
    A = F.zeros(a * order, a * order)
    for j in range(a):
        A[j * order + perm, j * order + np.arange(order)] = F.one()
    return A


# -- degrees and reports ----------------------------------------------------------

def hd_bound(bounds, s):
    """A priori degree bound for ``H_s`` of a presented module."""
    if bounds is None:
        return None
    if s == 0:
        return bounds.gen
    if s == 1:
        return bounds.rel if bounds.gen != NEG_INF else NEG_INF
    return bounds.gen + bounds.rel + s - 1


def hd(V, s, bounds=None, method="koszul", upto=None, resolution=None):
    """``hd_s(V)``: top degree of ``H_s(V)``."""
    bounds = bounds if bounds is not None else V.bounds
    if method == "koszul":
        dims = koszul_homology_dims(V, s, upto)
    else:
        if resolution is None:
            resolution = free_resolution(V, s, bounds=bounds, allow_uncertified=True)
        dims = resolution_homology_dims(resolution, s, upto)
    b = hd_bound(bounds, s)
    certified = b is not None and V.window >= max(b, 0 if b == NEG_INF else b) \
        and (upto is None or upto >= b)
    return DegreeValue(top_degree(dims), certified)


def required_window(bounds, s_max):
    """Smallest window certifying ``gd``, ``td`` and ``hd_1..hd_{s_max}``."""
    if bounds is None:
        return None
    need = max(bounds.gen, bounds.gen + bounds.rel,
               hd_bound(bounds, max(s_max, 1)) if s_max >= 1 else NEG_INF)
    return 0 if need == NEG_INF else int(need)


@dataclass
class InvariantReport:
    gd: DegreeValue
    td: DegreeValue
    hd: list
    window: int
    bounds: Bounds | None
    homology_dims: dict = dc_field(default_factory=dict)

    @property
    def certified(self):
        return self.gd.certified and self.td.certified and all(h.certified for h in self.hd)

    def to_json(self):
        out = {"gd": self.gd.to_json(), "td": self.td.to_json(),
               "hd": [h.to_json() for h in self.hd], "window": self.window,
               "certified": self.certified}
        for s, h in enumerate(self.hd[1:], start=1):
            out[f"hd{s}"] = h.to_json()
        if self.bounds is not None:
            out["bounds"] = {"g": encode(self.bounds.gen), "r": encode(self.bounds.rel)}
        out["homology_dims"] = {str(s): d for s, d in self.homology_dims.items()}
        return out


def invariant_report(V, s_max, bounds=None, allow_uncertified=False, slack=1):
    """``gd``, ``td`` and ``hd_0..hd_{s_max}`` with certificates.

    Homology is evaluated up to ``slack`` degrees past each certified bound
    (capped by the window), so a bound violation there would be visible.
    """
    bounds = bounds if bounds is not None else V.bounds
    need = required_window(bounds, s_max)
    if need is None or V.window < need:
        if not allow_uncertified:
            raise CertificateError(
                f"window {V.window} cannot certify invariants up to s={s_max}; "
                f"need window >= {need}", required=need, available=V.window)
    g = gd(V, bounds)
    t = torsion_degree(V, bounds)
    hds, hdims = [g], {0: h0_dims(V)}
    for s in range(1, s_max + 1):
        b = hd_bound(bounds, s)
        upto = None if b is None or b == inf else (
            -1 if b == NEG_INF else min(V.window, int(b) + slack))
        if upto is not None and upto < 0:
            dims = []
        else:
            dims = koszul_homology_dims(V, s, upto)
        hdims[s] = dims
        certified = b is not None and (b == NEG_INF or V.window >= b)
        hds.append(DegreeValue(top_degree(dims), certified))
    return InvariantReport(g, t, hds, V.window, bounds, hdims)


@dataclass
class ProjectiveDimension:
    value: int | None           # None when no termination was seen
    at_least: int

    def to_json(self):
        return self.value if self.value is not None else f">={self.at_least}"


def projective_dimension(V, s_max, bounds=None, allow_uncertified=False):
    """Length of the computed free resolution if it stops by ``s_max``.

    Over a field a module of finite projective dimension is projective, so a
    nonzero ``H_s`` for some ``s >= 1`` proves the dimension is infinite.
    """
    bounds = bounds if bounds is not None else V.bounds
    P0, _ = free_cover(V, bounds, allow_uncertified=allow_uncertified)
    if P0.dims == list(V.dims):        # the cover is onto, so equal dims means iso
        return ProjectiveDimension(0, 0)
    if s_max == 0:
        return ProjectiveDimension(None, 1)
    res = free_resolution(V, s_max, bounds=bounds, allow_uncertified=allow_uncertified)
    for s in range(0, s_max + 1):
        if not res.terms[s + 1].degrees:
            return ProjectiveDimension(s, s)
    return ProjectiveDimension(None, s_max + 1)
