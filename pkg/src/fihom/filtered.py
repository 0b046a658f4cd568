"""Filtered modules, the finite complex of filtered modules, and polynomial growth."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb

from flint import fmpq, fmpq_mat

from . import category as cat
from .degree import NEG_INF, DegreeValue, encode
from .homology import gd as gen_degree
from .linalg import rank
from .modules import (Bounds, DegreewiseModule, Presentation, Relation, WindowError,
                      _tokens, compile_presentation, compose_maps, generated_spans,
                      induced_quotient, induced_submodule, map_cokernel)
from .shift import natural_map, shift, torsion_degree, torsion_split


class InvariantViolation(RuntimeError):
    """A computed object contradicts a structural guarantee."""


def stable_threshold(gd, td):
    """``max(td, 2 gd - 2) + 1``, clamped at 0."""
    t = max(td, 2 * gd - 2) + 1
    return 0 if t == NEG_INF or t < 0 else int(t)


def filtered_window(bounds):
    """Window on which the greedy filtration test is conclusive."""
    g, r = bounds.gen, bounds.rel
    if g == NEG_INF:
        return 0
    return int(g + max(r, g) + 1)


# -- basic filtered modules -------------------------------------------------------

@dataclass
class BasicFilteredSpec:
    """A G_n-representation ``W``; the module it induces is ``C (x)_{kG_n} W``."""

    degree: int
    dim: int
    s: list             # s_1..s_{n-1}
    c: list             # colour on coordinate 1, one matrix per group element

    def to_json(self):
        return {"degree": self.degree, "dim": self.dim}


def representation_of(V, n):
    """The G_n-representation ``V_n`` as a ``BasicFilteredSpec``."""
    return BasicFilteredSpec(n, V.dims[n], V.s_list(n), V.c_list(n))


def basic_filtered(spec, window, field, group):
    """``C (x)_{kG_n} W`` presented by ``dim W`` generators in degree ``n``."""
    n, w = spec.degree, spec.dim
    if n > window:
        raise WindowError(f"basic filtered module of degree {n} needs window >= {n}",
                          required=n, available=window)
    ident = cat.identity(n, group)
    rels = []
    for tok in _tokens(n, group):
        x = cat.generator_morphism(tok, n, group)
        A = spec.s[tok[1] - 1] if tok[0] == "s" else spec.c[tok[1]]
        for j in range(w):
            terms = [(j, x, field.one())]
            terms += [(l, ident, field.neg(A[l, j])) for l in range(w) if A[l, j] != 0]
            rels.append(Relation(n, terms))
    P = Presentation(field, group, [n] * w, rels, window)
    V = compile_presentation(P)
    if not w:
        V.bounds = Bounds()
    return V


# -- filtration test --------------------------------------------------------------

@dataclass
class FilteredVerdict:
    filtered: bool
    witness: list                     # BasicFilteredSpecs peeled so far
    failure_degree: int | None = None
    expected: int | None = None
    found: int | None = None
    certified: bool = True

    def __bool__(self):
        return self.filtered

    def to_json(self):
        out = {"filtered": self.filtered, "certified": self.certified,
               "witness": [w.to_json() for w in self.witness]}
        if not self.filtered:
            out.update(failure_degree=self.failure_degree, expected=self.expected,
                       found=self.found)
        return out


def is_filtered(V, bounds=None):
    """Greedy peeling by basic filtered modules.

    The submodule generated by the lowest nonzero degree ``V_{n0}`` is a
    quotient of ``C (x) V_{n0}``; equal dimensions ``binom(m, n0) dim V_{n0}``
    in every degree make that surjection an isomorphism.
    """
    bounds = bounds if bounds is not None else V.bounds
    certified = bounds is not None and V.window >= filtered_window(bounds)
    F = V.field
    witness = []
    cur = V
    while not cur.is_zero():
        n0 = next(n for n, d in enumerate(cur.dims) if d)
        w = cur.dims[n0]
        witness.append(representation_of(cur, n0))
        spans = generated_spans(cur, {n0: F.eye(w)})
        for m in range(n0, cur.window + 1):
            expected = comb(m, n0) * w
            if spans[m].dim != expected:
                return FilteredVerdict(False, witness, m, expected, spans[m].dim, certified)
        cur = induced_quotient(cur, [b.quotient() for b in spans])
    return FilteredVerdict(True, witness, certified=certified)


def generated_submodule(V, n):
    """Submodule generated by all of ``V_n``."""
    spans = generated_spans(V, {n: V.field.eye(V.dims[n])})
    return induced_submodule(V, [b.subspace() for b in spans])


# -- the complex of filtered modules ------------------------------------------------

@dataclass
class ComplexLevel:
    module: DegreewiseModule          # V^{-j}
    gd: DegreeValue
    td: DegreeValue
    torsion: DegreewiseModule         # V^{-j}_T = H_{-j-1}
    shift: int | None = None          # N_{j+1}; None at the last level
    term: DegreewiseModule | None = None      # F^{-j-1}
    verdict: FilteredVerdict | None = None


@dataclass
class FilteredComplex:
    V: DegreewiseModule
    levels: list
    deltas: list                      # delta^{-1}, delta^{-2}, ...
    homology_checks: list = dc_field(default_factory=list)

    @property
    def terms(self):
        return [lv.term for lv in self.levels if lv.term is not None]

    @property
    def length(self):
        """Number of filtered terms ``F^{-1}..F^{-n-1}``."""
        return len(self.terms)

    @property
    def shifts(self):
        return [lv.shift for lv in self.levels if lv.shift is not None]

    @property
    def homology_td(self):
        """``td(H_{-1}), td(H_{-2}), ...``."""
        return [lv.td for lv in self.levels]

    @property
    def derived_regularity(self):
        tds = self.homology_td
        value = max((t.value for t in tds), default=NEG_INF)
        return DegreeValue(value, all(t.certified for t in tds))

    def to_json(self):
        return {
            "length": self.length,
            "shifts": self.shifts,
            "terms": [{"dims": t.dims, "window": t.window,
                       "filtration": lv.verdict.to_json() if lv.verdict else None}
                      for lv, t in ((lv, lv.term) for lv in self.levels) if t is not None],
            "homology": [{"index": -1 - j, "td": lv.td.to_json(), "dims": lv.torsion.dims}
                         for j, lv in enumerate(self.levels)],
            "derived_regularity": self.derived_regularity.to_json(),
        }


def complex_window_demand(gd, td, rel):
    """Window needed to build and certify the whole complex.

    ``gd``, ``td`` and ``rel`` describe the input; later levels use the
    a priori bounds ``gd(V^{-j}) <= gd - j`` and relation degree ``<= gd - j + 1``.
    """
    if gd == NEG_INF:
        return 0
    need, offset = 0, 0
    g, t, r = gd, td, max(rel, gd)
    j = 0
    while g >= 0:
        if j:
            need = max(need, offset + g + r)
        N = stable_threshold(g, t)
        need = max(need, offset + N + filtered_window(Bounds(g, max(r, t))))
        offset += N
        j += 1
        g, r = gd - j, gd - j + 1
        t = g + r - 1
    return int(max(need, offset))


def filtered_complex(V, gd_value=None, td_value=None, rel=None, check=True):
    """``0 -> V -> F^{-1} -> ... -> F^{-n-1} -> 0`` with filtered terms.

    ``gd_value``/``td_value`` are certified invariants of ``V`` (computed
    when omitted) and ``rel`` a relation-degree bound.
    """
    bounds = V.bounds
    g0 = gd_value if gd_value is not None else gen_degree(V, bounds)
    t0 = td_value if td_value is not None else torsion_degree(V, bounds)
    r0 = rel if rel is not None else (bounds.rel if bounds is not None else None)
    levels, deltas = [], []
    cur, gd_j, td_j = V, g0, t0
    cur_bounds = Bounds(g0.value, max(r0, g0.value)) if r0 is not None else None
    to_prev = None                     # F^{-j} -> V^{-j}
    j = 0
    while True:
        split = torsion_split(cur, td_j)
        level = ComplexLevel(cur, gd_j, td_j, split.VT)
        levels.append(level)
        if split.VF.is_zero():
            break
        N = stable_threshold(gd_j.value, td_j.value)
        if N > cur.window:
            raise WindowError(f"level {j}: shift {N} exceeds window {cur.window}",
                              required=N, available=cur.window)
        VF = split.VF
        if cur_bounds is not None:
            VF.bounds = Bounds(cur_bounds.gen, max(cur_bounds.rel, td_j.value))
        term = shift(VF, N)
        to_term = compose_maps(natural_map(VF, N), split.projection)
        level.shift, level.term = N, term
        level.verdict = is_filtered(term, VF.bounds)
        if check and not level.verdict:
            raise InvariantViolation(
                f"F^{-j - 1} is not filtered (degree {level.verdict.failure_degree}: "
                f"expected {level.verdict.expected}, found {level.verdict.found})")
        deltas.append(to_term if to_prev is None else compose_maps(to_term, to_prev))
        nxt, q = map_cokernel(to_term)
        j += 1
        nb = Bounds(g0.value - j, g0.value - j + 1) if g0.value != NEG_INF else Bounds()
        nxt.bounds = nb
        gd_j = gen_degree(nxt, nb)
        td_j = torsion_degree(nxt, nb)
        if gd_j.value > nb.gen:
            raise InvariantViolation(f"gd(V^{-j}) = {gd_j.value} exceeds {nb.gen}")
        cur, cur_bounds, to_prev = nxt, Bounds(gd_j.value, nb.rel), q
    cx = FilteredComplex(V, levels, deltas)
    if check:
        _check_complex(cx)
    return cx


def _check_complex(cx):
    F = cx.V.field
    ds = cx.deltas
    for a in range(len(ds) - 1):
        dd = compose_maps(ds[a + 1], ds[a])
        if any(not F.is_zero(M) for M in dd.mats):
            raise InvariantViolation(f"delta o delta != 0 at position {-a - 1}")
    # homology at V, F^{-1}, ... equals the torsion part of V^{-j}
    sources = [cx.V] + [d.target for d in ds]
    for j, lv in enumerate(cx.levels):
        out_map = ds[j] if j < len(ds) else None
        in_map = ds[j - 1] if j >= 1 else None
        M = sources[j]
        N = M.window if out_map is None else out_map.window
        dims = []
        for n in range(N + 1):
            k = M.dims[n] - (rank(out_map.mats[n], F) if out_map is not None else 0)
            im = rank(in_map.mats[n], F) if in_map is not None else 0
            dims.append(k - im)
        expected = lv.torsion.dims[:N + 1]
        cx.homology_checks.append((dims, expected))
        if dims != expected:
            raise InvariantViolation(f"H_{-j - 1} has dims {dims}, expected {expected}")


def derived_regularity(V, **kw):
    return filtered_complex(V, **kw).derived_regularity


# -- polynomial growth ----------------------------------------------------------------

@dataclass
class GrowthReport:
    stable_from: int
    poly: list                  # Fraction coefficients, constant term first
    verified_range: tuple
    certified: bool = True

    @property
    def degree(self):
        return len(self.poly) - 1 if self.poly else NEG_INF

    def __call__(self, x):
        return sum(c * x ** i for i, c in enumerate(self.poly))

    def to_json(self):
        return {"stable_from": self.stable_from, "poly": format_poly(self.poly),
                "coefficients": [str(c) for c in self.poly],
                "degree": encode(self.degree),
                "verified_range": list(self.verified_range), "certified": self.certified}


class GrowthMismatch(InvariantViolation):
    pass


def fit_polynomial(V, gd_value=None, td_value=None):
    """Exact polynomial through ``gd + 1`` stable degrees, checked on the rest."""
    g = gd_value if gd_value is not None else gen_degree(V)
    t = td_value if td_value is not None else torsion_degree(V)
    start = stable_threshold(g.value, t.value)
    npts = 0 if g.is_neg_inf else g.value + 1
    if start + npts > V.window:
        raise WindowError(f"polynomial fit needs window >= {start + npts}",
                          required=start + npts, available=V.window)
    xs = list(range(start, start + npts))
    if npts:
        A = fmpq_mat([[fmpq(x) ** i for i in range(npts)] for x in xs])
        b = fmpq_mat([[V.dims[x]] for x in xs])
        sol = A.solve(b)
        poly = [Fraction(int(sol[i, 0].p), int(sol[i, 0].q)) for i in range(npts)]
        while poly and poly[-1] == 0:
            poly.pop()
    else:
        poly = []
    rep = GrowthReport(start, poly, (start, V.window), g.certified and t.certified)
    for n in range(start, V.window + 1):
        if rep(n) != V.dims[n]:
            raise GrowthMismatch(f"dim V_{n} = {V.dims[n]} but the fitted polynomial gives {rep(n)}")
    return rep


def format_poly(coeffs, var="X"):
    """``[0, -1, 1] -> "X^2 - X"``."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[i])
        if c == 0:
            continue
        mag = abs(c)
        mono = "" if i == 0 else var if i == 1 else f"{var}^{i}"
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}" if mag.denominator == 1 else f"({mag})*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
