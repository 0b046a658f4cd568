"""Finitely generated FI_G-modules stored degreewise on a window ``0..N``.

A module is recorded through the action of the generators of each G_n
(adjacent transpositions ``s_i`` and colour insertions ``c_g`` on the first
coordinate) together with the structure maps ``phi_n: V_n -> V_{n+1}``
realising the standard inclusions.  Matrices act on column vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import inf

import numpy as np

from . import category as cat
from .linalg import (Quotient, Subspace, field_from_spec, field_to_json, quotient_by_span, rank,
                     subspace_of_kernel, subspace_of_span)


class WindowError(ValueError):
    """A computation needs a larger truncation window."""

    def __init__(self, message, required=None, available=None):
        super().__init__(message)
        self.required = required
        self.available = available


@dataclass(frozen=True)
class Bounds:
    """Degree bounds of a presentation: max generator and max relation degree."""

    gen: float = -inf
    rel: float = -inf


class DegreewiseModule:
    def __init__(self, field, group, dims, s, c, phi, bounds=None, label=None):
        self.field = field
        self.group = group
        self.dims = [int(d) for d in dims]
        self.window = len(self.dims) - 1
        self._s = s          # _s[n][i-1]: action of s_i on V_n
        self._c = c          # _c[n][g]: action of c_g on V_n (empty for n = 0)
        self._phi = phi      # _phi[n]: dims[n+1] x dims[n], n < window
        self.bounds = bounds
        self.label = label
        self._faces = {}

    def __repr__(self):
        name = f" {self.label}" if self.label else ""
        return f"<DegreewiseModule{name} dims={self.dims}>"

    # -- generator actions ----------------------------------------------
    def act(self, n, token, X):
        if token[0] == "s":
            return self.field.matmul(self._s[n][token[1] - 1], X)
        return self.field.matmul(self._c[n][token[1]], X)

    def apply_phi(self, n, X):
        return self.field.matmul(self._phi[n], X)

    def s_matrix(self, n, i):
        return self._s[n][i - 1]

    def c_matrix(self, n, g):
        return self._c[n][g]

    def phi(self, n):
        return self._phi[n]

    def apply_word(self, n, word, X):
        for token in word:
            X = self.act(n, token, X)
        return X

    def element_matrix(self, tau):
        n = tau.source
        return self.apply_word(n, cat.element_word(tau, self.group), self.field.eye(self.dims[n]))

    def apply_morphism_matrix(self, alpha, X):
        m, n = alpha.source, alpha.target
        if n > self.window:
            raise WindowError(f"morphism target {n} exceeds window {self.window}",
                              required=n, available=self.window)
        for j in range(m, n):
            X = self.apply_phi(j, X)
        tau = cat.canonical_factor(alpha, self.group)
        return self.apply_word(n, cat.element_word(tau, self.group), X)

    def morphism_matrix(self, alpha):
        return self.apply_morphism_matrix(alpha, self.field.eye(self.dims[alpha.source]))

    def face_maps(self, m):
        """``[E_1, ..., E_{m+1}]`` with ``E_k = V(skip k): V_m -> V_{m+1}``."""
        if m not in self._faces:
            Y = self.phi(m) if not isinstance(self, FreeModule) else \
                self.apply_phi(m, self.field.eye(self.dims[m]))
            out = [None] * (m + 2)
            out[m + 1] = Y
            for k in range(m, 0, -1):
                Y = self.act(m + 1, ("s", k), Y)
                out[k] = Y
            self._faces[m] = out[1:]
        return self._faces[m]

    def apply_faces(self, m, X):
        """Stack ``[E_{m+1} X, E_m X, ..., E_1 X]`` without forming the E's."""
        Y = self.apply_phi(m, X)
        blocks = [Y]
        for k in range(m, 0, -1):
            Y = self.act(m + 1, ("s", k), Y)
            blocks.append(Y)
        return blocks

    def total_dim(self):
        return sum(self.dims)

    def is_zero(self):
        return not any(self.dims)

    def restrict(self, N):
        """Truncate to the window ``0..N``."""
        if N > self.window:
            raise WindowError(f"cannot extend window {self.window} to {N}",
                              required=N, available=self.window)
        if N < 0:
            return zero_module(self.field, self.group, -1)
        return DegreewiseModule(self.field, self.group, self.dims[:N + 1],
                                [self.s_list(n) for n in range(N + 1)],
                                [self.c_list(n) for n in range(N + 1)],
                                [self.phi(n) for n in range(N)],
                                bounds=self.bounds, label=self.label)

    def extend_by_zero(self, N):
        """Enlarge the window to ``N`` with zero spaces; only meaningful when the
        module is known to vanish above its current window."""
        if N <= self.window:
            return self
        F, W = self.field, self.window
        dims = self.dims + [0] * (N - W)
        s = [self.s_list(n) if n <= W else [F.zeros(0, 0)] * (n - 1) for n in range(N + 1)]
        c = [self.c_list(n) if n <= W else [F.zeros(0, 0)] * self.group.order
             for n in range(N + 1)]
        phi = [self.phi(n) if n < W else F.zeros(dims[n + 1], dims[n]) for n in range(N)]
        return DegreewiseModule(F, self.group, dims, s, c, phi, bounds=self.bounds,
                                label=self.label)

    def s_list(self, n):
        return [self.s_matrix(n, i) for i in range(1, n)]

    def c_list(self, n):
        return [self.c_matrix(n, g) for g in range(self.group.order)] if n >= 1 else []


class FreeModule(DegreewiseModule):
    """``M(d_1) + ... + M(d_k)`` with basis pairs ``(i, alpha in C(d_i, n))``."""

    def __init__(self, field, group, degrees, window, label=None):
        degrees = [int(d) for d in degrees]
        for d in degrees:
            if d > window:
                raise WindowError(f"generator degree {d} exceeds window {window}",
                                  required=d, available=window)
        self.degrees = degrees
        self.offsets = []
        dims = []
        for n in range(window + 1):
            off, tot = [], 0
            for d in degrees:
                off.append(tot)
                tot += cat.hom_size(d, n, group.order)
            self.offsets.append(off)
            dims.append(tot)
        g = max(degrees) if degrees else -inf
        super().__init__(field, group, dims, None, None, None,
                         bounds=Bounds(g, -inf), label=label or f"M{tuple(degrees)}")
        self._perm_cache = {}

    def basis_index(self, gen, alpha):
        n = alpha.target
        idx = cat.hom_index(self.degrees[gen], n, self.group.order)
        return self.offsets[n][gen] + idx[(alpha.injection, alpha.colors)]

    def basis(self, n):
        out = []
        for i, d in enumerate(self.degrees):
            out.extend((i, a) for a in cat.hom_set(d, n, self.group))
        return out

    def perm(self, n, token):
        """Index array ``p`` with ``token . e_q = e_{p[q]}``; token "phi" maps into degree n+1."""
        key = (n, token)
        if key not in self._perm_cache:
            parts = []
            target_n = n + 1 if token == "phi" else n
            for i, d in enumerate(self.degrees):
                if d > n:
                    continue
                local = _free_perm(d, n, self.group, token)
                parts.append(local + self.offsets[target_n][i])
            self._perm_cache[key] = (np.concatenate(parts) if parts
                                     else np.zeros(0, dtype=np.int64))
        return self._perm_cache[key]

    def _scatter(self, p, rows, X):
        out = self.field.zeros(rows, X.shape[1])
        if p.size:
            out[p] = X
        return out

    def act(self, n, token, X):
        return self._scatter(self.perm(n, token), self.dims[n], X)

    def apply_phi(self, n, X):
        return self._scatter(self.perm(n, "phi"), self.dims[n + 1], X)

    def _dense(self, p, rows, cols):
        M = self.field.zeros(rows, cols)
        if p.size:
            M[p, np.arange(cols)] = self.field.one()
        return M

    def s_matrix(self, n, i):
        return self._dense(self.perm(n, ("s", i)), self.dims[n], self.dims[n])

    def c_matrix(self, n, g):
        return self._dense(self.perm(n, ("c", g)), self.dims[n], self.dims[n])

    def phi(self, n):
        return self._dense(self.perm(n, "phi"), self.dims[n + 1], self.dims[n])

    def restrict(self, N):
        return FreeModule(self.field, self.group, [d for d in self.degrees], N) \
            if all(d <= N for d in self.degrees) else super().restrict(N)


@lru_cache(maxsize=None)
def _free_perm(d, n, group, token):
    basis = cat._hom_raw(d, n, group.order)
    if token == "phi":
        index = cat.hom_index(d, n + 1, group.order)
        return np.array([index[key] for key in basis], dtype=np.int64)
    index = cat.hom_index(d, n, group.order)
    out = np.empty(len(basis), dtype=np.int64)
    if token[0] == "s":
        i = token[1]
        swap = {i: i + 1, i + 1: i}
        for q, (inj, col) in enumerate(basis):
            out[q] = index[(tuple(swap.get(v, v) for v in inj), col)]
    else:
        g = token[1]
        t = group.table
        for q, (inj, col) in enumerate(basis):
            newcol = tuple(int(t[g, c]) if v == 1 else c for v, c in zip(inj, col))
            out[q] = index[(inj, newcol)]
    out.setflags(write=False)
    return out


def free_module(degrees, window, field, group):
    """The free module ``M(d_1) + ... + M(d_k)`` on the window ``0..window``."""
    return FreeModule(field, group, degrees, window)


def zero_module(field, group, window):
    dims = [0] * (window + 1)
    z = field.zeros(0, 0)
    return DegreewiseModule(field, group, dims,
                            [[z] * max(n - 1, 0) for n in range(window + 1)],
                            [[z] * group.order if n >= 1 else [] for n in range(window + 1)],
                            [z] * max(window, 0), bounds=Bounds(), label="0")


# -- maps --------------------------------------------------------------------

class ModuleMap:
    def __init__(self, source, target, mats):
        self.source = source
        self.target = target
        self.mats = list(mats)
        self.window = len(self.mats) - 1

    @property
    def field(self):
        return self.source.field

    def __repr__(self):
        return f"<ModuleMap {self.source.dims[:self.window + 1]} -> {self.target.dims[:self.window + 1]}>"

    def ranks(self):
        return [rank(M, self.field) for M in self.mats]

    def check(self):
        """Violations of the commutation rules (empty when f is a module map)."""
        F = self.field
        V, W = self.source, self.target
        problems = []
        for n in range(self.window + 1):
            M = self.mats[n]
            if M.shape != (W.dims[n], V.dims[n]):
                problems.append(f"degree {n}: matrix shape {M.shape}")
                continue
            for tok in _tokens(n, V.group):
                if not F.equal(W.act(n, tok, M), F.matmul(M, V.act(n, tok, F.eye(V.dims[n])))):
                    problems.append(f"degree {n}: does not commute with {tok}")
            if n < self.window:
                lhs = W.apply_phi(n, M)
                rhs = F.matmul(self.mats[n + 1], V.apply_phi(n, F.eye(V.dims[n])))
                if not F.equal(lhs, rhs):
                    problems.append(f"degree {n}: does not commute with phi")
        return problems


def identity_map(V):
    return ModuleMap(V, V, [V.field.eye(d) for d in V.dims])


def zero_map(V, W):
    N = min(V.window, W.window)
    return ModuleMap(V, W, [V.field.zeros(W.dims[n], V.dims[n]) for n in range(N + 1)])


def compose_maps(g, f):
    """``g o f``."""
    F = f.field
    N = min(f.window, g.window)
    return ModuleMap(f.source, g.target, [F.matmul(g.mats[n], f.mats[n]) for n in range(N + 1)])


def _tokens(n, group):
    toks = [("s", i) for i in range(1, n)]
    if n >= 1:
        toks += [("c", g) for g in range(group.order)]
    return toks


def induced_submodule(V, spaces, label=None, bounds=None):
    """Module structure on stable subspaces ``spaces[n]`` of ``V_n``."""
    F = V.field
    N = len(spaces) - 1
    s, c, phi = [], [], []
    for n in range(N + 1):
        B = spaces[n]
        s.append([B.coords(V.act(n, ("s", i), B.basis)) for i in range(1, n)])
        c.append([B.coords(V.act(n, ("c", g), B.basis)) for g in range(V.group.order)]
                 if n >= 1 else [])
        if n < N:
            phi.append(spaces[n + 1].coords(V.apply_phi(n, B.basis)))
    dims = [sp.dim for sp in spaces]
    return DegreewiseModule(F, V.group, dims, s, c, phi, bounds=bounds, label=label)


def induced_quotient(V, quots, label=None, bounds=None):
    """Module structure on ``V_n / U_n`` for stable subspaces given as quotients."""
    F = V.field
    N = len(quots) - 1
    s, c, phi = [], [], []
    free = isinstance(V, FreeModule)
    for n in range(N + 1):
        Q = quots[n]
        keep = np.array(Q.keep, dtype=np.int64)

        def induced(token, target_q, deg=n):
            if free:
                p = V.perm(deg, token)
                return target_q.proj[:, p[keep]] if keep.size else F.zeros(target_q.dim, 0)
            Y = V.act(deg, token, Q.lift(F)) if token != "phi" else V.apply_phi(deg, Q.lift(F))
            return F.matmul(target_q.proj, Y)

        s.append([induced(("s", i), Q) for i in range(1, n)])
        c.append([induced(("c", g), Q) for g in range(V.group.order)] if n >= 1 else [])
        if n < N:
            phi.append(induced("phi", quots[n + 1]))
    dims = [q.dim for q in quots]
    return DegreewiseModule(F, V.group, dims, s, c, phi, bounds=bounds, label=label)


def map_kernel(f, label=None):
    """``(ker f, inclusion)``."""
    F = f.field
    spaces = [subspace_of_kernel(M, F) for M in f.mats]
    K = induced_submodule(f.source, spaces, label=label)
    return K, ModuleMap(K, f.source, [sp.basis for sp in spaces])


def map_image(f, label=None):
    """``(im f, inclusion into the target)``."""
    spaces = [subspace_of_span(M, f.field) for M in f.mats]
    I = induced_submodule(f.target, spaces, label=label)
    return I, ModuleMap(I, f.target, [sp.basis for sp in spaces])


def map_cokernel(f, label=None):
    """``(coker f, projection)``."""
    F = f.field
    quots = [quotient_by_span(M, F) for M in f.mats]
    C = induced_quotient(f.target.restrict(f.window) if f.target.window > f.window else f.target,
                         quots, label=label)
    return C, ModuleMap(f.target, C, [q.proj for q in quots])


def direct_sum(V, W, label=None):
    if V.field != W.field or V.group != W.group:
        raise ValueError("direct sum needs a common field and group")
    if V.window != W.window:
        raise ValueError(f"window mismatch {V.window} vs {W.window}")
    F = V.field

    def block(A, B):
        out = F.zeros(A.shape[0] + B.shape[0], A.shape[1] + B.shape[1])
        out[:A.shape[0], :A.shape[1]] = A
        out[A.shape[0]:, A.shape[1]:] = B
        return out

    N = V.window
    s = [[block(V.s_matrix(n, i), W.s_matrix(n, i)) for i in range(1, n)] for n in range(N + 1)]
    c = [[block(V.c_matrix(n, g), W.c_matrix(n, g)) for g in range(V.group.order)]
         if n >= 1 else [] for n in range(N + 1)]
    phi = [block(V.phi(n), W.phi(n)) for n in range(N)]
    bounds = None
    if V.bounds is not None and W.bounds is not None:
        bounds = Bounds(max(V.bounds.gen, W.bounds.gen), max(V.bounds.rel, W.bounds.rel))
    return DegreewiseModule(F, V.group, [a + b for a, b in zip(V.dims, W.dims)], s, c, phi,
                            bounds=bounds, label=label)


# -- spans -------------------------------------------------------------------

class SpanBuilder:
    """Incrementally maintained row-reduced basis of a subspace of ``F^d``."""

    def __init__(self, field, d):
        self.field = field
        self.d = d
        self.R = field.zeros(0, d)
        self.piv = []

    @property
    def dim(self):
        return len(self.piv)

    def reduce(self, W):
        """Reduce the rows of ``W`` modulo the current span."""
        if not self.piv or W.shape[0] == 0:
            return W
        return self.field.sub(W, self.field.matmul(W[:, self.piv], self.R))

    def add_columns(self, X):
        """Add the columns of ``X``; return the new basis rows (as columns)."""
        F = self.field
        if X.shape[1] == 0 or self.dim == self.d:
            return F.zeros(self.d, 0)
        W = self.reduce(X.T.copy())
        R2, piv2 = F.rref(W)
        if not piv2:
            return F.zeros(self.d, 0)
        if self.piv:
            self.R = F.sub(self.R, F.matmul(self.R[:, piv2], R2))
        rows = np.concatenate([self.R, R2], axis=0)
        piv = self.piv + piv2
        order = np.argsort(piv, kind="stable")
        self.R = rows[order]
        self.piv = [piv[i] for i in order]
        return R2.T.copy()

    def subspace(self):
        return Subspace(self.R.T.copy(), list(self.piv))

    def quotient(self):
        F = self.field
        pivset = set(self.piv)
        keep = [i for i in range(self.d) if i not in pivset]
        proj = F.zeros(len(keep), self.d)
        for j, q in enumerate(keep):
            proj[j, q] = F.one()
        if self.piv and keep:
            proj[:, self.piv] = F.neg(self.R[:, keep].T)
        return Quotient(proj, keep, self.d)


def saturate(V, n, builder, frontier):
    """Close ``builder``'s span under G_n, starting from newly added columns."""
    tokens = _tokens(n, V.group)
    while frontier.shape[1]:
        images = [V.act(n, tok, frontier) for tok in tokens]
        if not images:
            break
        frontier = builder.add_columns(np.concatenate(images, axis=1))
    return builder


def generated_spans(V, elements, upto=None):
    """Builders for the submodule of ``V`` generated by ``elements``.

    ``elements`` maps a degree to a matrix whose columns are elements of
    ``V_n``.  Degree ``n`` of the submodule is the image of degree ``n-1``
    under all face maps plus the G_n-span of the new elements.
    """
    N = V.window if upto is None else upto
    F = V.field
    out = []
    for n in range(N + 1):
        b = SpanBuilder(F, V.dims[n])
        if n >= 1 and out[n - 1].dim:
            prev = out[n - 1].R.T
            for Y in V.apply_faces(n - 1, prev):
                b.add_columns(Y)
                if b.dim == b.d:
                    break
        new = elements.get(n)
        if new is not None and new.shape[1]:
            frontier = b.add_columns(new)
            saturate(V, n, b, frontier)
        out.append(b)
    return out


# -- presentations -------------------------------------------------------------

@dataclass
class Relation:
    degree: int
    terms: list          # (generator index, Morphism, coefficient)


@dataclass
class Presentation:
    field: object
    group: cat.FiniteGroup
    generators: list
    relations: list = dc_field(default_factory=list)
    window: int | None = None

    @property
    def bounds(self):
        g = max(self.generators) if self.generators else -inf
        r = max((rel.degree for rel in self.relations), default=-inf)
        return Bounds(g, r)

    def check(self):
        problems = []
        for k, rel in enumerate(self.relations):
            for gen, alpha, _ in rel.terms:
                if not 0 <= gen < len(self.generators):
                    problems.append(f"relation {k}: unknown generator {gen}")
                    continue
                if alpha.source != self.generators[gen] or alpha.target != rel.degree:
                    problems.append(f"relation {k}: term morphism {alpha.source}->{alpha.target} "
                                    f"does not match generator degree {self.generators[gen]} "
                                    f"and relation degree {rel.degree}")
                if any(not 0 <= cval < self.group.order for cval in alpha.colors):
                    problems.append(f"relation {k}: colour out of range")
        return problems

    def relation_vector(self, free, rel):
        F = self.field
        v = F.zeros(free.dims[rel.degree], 1)
        for gen, alpha, coeff in rel.terms:
            i = free.basis_index(gen, alpha)
            v[i, 0] = F.add(v[i, 0], F.element(coeff))
        return v

    def to_json(self):
        F = self.field
        return {
            "field": field_to_json(F),
            "group": self.group.to_json(),
            "generators": list(self.generators),
            "relations": [
                {"degree": rel.degree,
                 "terms": [{"gen": gen, "injection": list(a.injection),
                            "colors": list(a.colors), "coeff": F.to_str(F.element(cf))}
                           for gen, a, cf in rel.terms]}
                for rel in self.relations],
            "window": self.window,
        }

    @classmethod
    def from_json(cls, data):
        field = field_from_spec(data["field"])
        group = cat.FiniteGroup.from_json(data.get("group", {"order": 1}))
        gens = [int(d) for d in data["generators"]]
        rels = []
        for k, rd in enumerate(data.get("relations", [])):
            deg = int(rd["degree"])
            terms = []
            for t in rd["terms"]:
                gen = int(t["gen"])
                if not 0 <= gen < len(gens):
                    raise ValueError(f"relations[{k}]: unknown generator {gen}")
                inj = tuple(int(v) for v in t["injection"])
                cols = tuple(int(v) for v in t.get("colors", [group.identity] * len(inj)))
                alpha = cat.Morphism(gens[gen], deg, inj, cols)
                terms.append((gen, alpha, field.element(t.get("coeff", 1))))
            rels.append(Relation(deg, terms))
        P = cls(field, group, gens, rels, data.get("window"))
        problems = P.check()
        if problems:
            raise ValueError("; ".join(problems))
        return P


@dataclass
class CompiledModule:
    module: DegreewiseModule
    free: FreeModule
    relations: list      # SpanBuilders for the relation submodule, per degree
    projection: ModuleMap


def compile_presentation(P, window=None, full=False):
    """The quotient ``F / U`` of the free module by the relation submodule."""
    N = P.window if window is None else window
    if N is None:
        raise WindowError("no window given")
    g, r = P.bounds.gen, P.bounds.rel
    if max(g, r) > N:
        raise WindowError(f"window {N} too small for generator/relation degrees (needs {int(max(g, r))})",
                          required=int(max(g, r)), available=N)
    free = FreeModule(P.field, P.group, P.generators, N)
    elements = {}
    for rel in P.relations:
        v = P.relation_vector(free, rel)
        elements[rel.degree] = v if rel.degree not in elements else \
            np.concatenate([elements[rel.degree], v], axis=1)
    spans = generated_spans(free, elements)
    quots = [b.quotient() for b in spans]
    V = induced_quotient(free, quots, bounds=P.bounds)
    if not full:
        return V
    return CompiledModule(V, free, spans, ModuleMap(free, V, [q.proj for q in quots]))


def apply_morphism(V, alpha, v):
    """``V(alpha)(v)`` for a vector ``v`` in ``V_m``."""
    X = v.reshape(-1, 1) if v.ndim == 1 else v
    out = V.apply_morphism_matrix(alpha, X)
    return out[:, 0] if v.ndim == 1 else out


def validate(V):
    """Violated module relations over the whole window (empty when valid)."""
    F, G = V.field, V.group
    problems = []
    e = G.identity
    for n in range(V.window + 1):
        d = V.dims[n]
        I = F.eye(d)

        def M(word, X=I, deg=n):
            return V.apply_word(deg, word, X)

        for i in range(1, n):
            if not F.equal(M([("s", i), ("s", i)]), I):
                problems.append(f"degree {n}: s_{i}^2 != 1")
            if i + 1 < n and not F.equal(M([("s", i), ("s", i + 1)] * 3), I):
                problems.append(f"degree {n}: braid relation fails for s_{i}, s_{i + 1}")
            for j in range(i + 2, n):
                if not F.equal(M([("s", i), ("s", j)]), M([("s", j), ("s", i)])):
                    problems.append(f"degree {n}: s_{i} and s_{j} do not commute")
        if n >= 1:
            if not F.equal(M([("c", e)]), I):
                problems.append(f"degree {n}: c_e != 1")
            for a in range(G.order):
                for b in range(G.order):
                    # c_a c_b = c_{ab}: c_b acts first
                    if not F.equal(M([("c", b), ("c", a)]), M([("c", G.mul(a, b))])):
                        problems.append(f"degree {n}: c_{a} c_{b} != c_{G.mul(a, b)}")
                for i in range(2, n):
                    if not F.equal(M([("s", i), ("c", a)]), M([("c", a), ("s", i)])):
                        problems.append(f"degree {n}: s_{i} and c_{a} do not commute")
                if n >= 2:
                    other = [("s", 1), ("c", a), ("s", 1)]
                    for b in range(G.order):
                        if not F.equal(M([("c", b)] + other), M(other + [("c", b)])):
                            problems.append(f"degree {n}: colours on coordinates 1, 2 do not commute")
        if n < V.window:
            P = V.phi(n)
            if P.shape != (V.dims[n + 1], d):
                problems.append(f"degree {n}: structure map has shape {P.shape}")
                continue
            for tok in _tokens(n, G):
                if not F.equal(V.act(n + 1, tok, P), F.matmul(P, M([tok]))):
                    problems.append(f"degree {n}: structure map not equivariant for {tok}")
            for a in range(G.order):
                if not F.equal(V.apply_word(n + 1, cat.color_at_word(a, n + 1), P), P):
                    problems.append(f"degree {n}: colour {a} on the new point moves the image")
            if n + 1 < V.window:
                PP = V.apply_phi(n + 1, P)
                if not F.equal(V.act(n + 2, ("s", n + 1), PP), PP):
                    problems.append(f"degree {n}: FI relation fails (two inclusions into {n + 2} differ)")
    return problems
