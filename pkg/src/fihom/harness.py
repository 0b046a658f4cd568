"""Random presentations and the property battery.

Each trial draws a presentation from its own stream
``PCG64(SeedSequence([seed, trial]))``, compiles it on a window large enough
to certify every quantity a property uses, and records pass/fail/skip per
property.  Results are independent of worker count and scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field

import numpy as np

from . import category as cat
from . import oracles
from .degree import NEG_INF, encode, top_degree
from .filtered import (basic_filtered, complex_window_demand, filtered_complex, filtered_window,
                       fit_polynomial, is_filtered, stable_threshold)
from .homology import (free_resolution, gd as gen_degree, h0_dims, invariant_report,
                       koszul_homology_dims, projective_dimension, required_window,
                       resolution_homology_dims)
from .linalg import field_from_spec, field_to_json, rank, subspace_of_kernel
from .modules import Bounds, Presentation, Relation, compile_presentation, free_module
from .shift import derivative, shift, socle_dims, torsion_degree, torsion_kernel, torsion_split

PROPERTIES = (
    "td-bound",                 # td <= gd + hd1 - 1
    "hd-bound-gd-hd1",          # hd_s <= gd + hd1 + s - 1
    "hd-bound-gd-td",           # hd_s <= max(2gd - 1, td) + s
    "hd1-relation-degree",      # hd1 <= r
    "derivative",               # DV = 0 iff gd <= 0, else gd(DV) = gd - 1; K = ker phi
    "socle-degree",             # td(V) = td(K) = gd(K)
    "complex-homology",         # td(H_-1) = td, td(H_i) <= 2gd + 2i + 2, length
    "derived-regularity",       # max td(H_i) <= max(td, 2gd - 2)
    "shift-filtered",           # Sigma_N V filtered for N = max(td, 2gd - 2) + 1
    "polynomial-growth",        # exact polynomial of degree <= gd past the threshold
    "torsion-hd",               # hd_s(V_T) <= td(V_T) + s
    "filtered-acyclic",         # H_s = 0 on free, basic filtered and complex terms
    "pd-zero-filtered",         # pd = 0 implies filtered
    "resolution-independence",  # canonical, redundant and Koszul Tor agree
    "bruteforce-h0-socle",      # hom-set enumeration agrees on H_0 and the socle
)

# largest |G_n| for which the group-algebra resolution route is run; exact
# rational arithmetic goes through Python objects and gets a smaller budget
RESOLUTION_GROUP_LIMIT = {"prime": 120, "rational": 24}


@dataclass
class FuzzConfig:
    seed: int = 42
    trials: int = 50
    field: str = "101"
    group_order: int = 2
    gmax: int = 2
    genmax: int = 2
    rmax: int = 3
    relmax: int = 3
    smax: int = 3
    checks: tuple = PROPERTIES

    def __post_init__(self):
        self.checks = tuple(self.checks)
        unknown = [c for c in self.checks if c not in PROPERTIES]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}")
        for name in ("trials", "group_order", "genmax"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("gmax", "rmax", "relmax", "smax"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.smax < 1:
            raise ValueError("smax must be at least 1")

    def to_json(self):
        out = asdict(self)
        out["checks"] = list(self.checks)
        out["field"] = field_to_json(field_from_spec(self.field))
        return out


def window_demand(cfg):
    """A priori window covering the worst presentation the config can draw."""
    g, r = cfg.gmax, max(cfg.rmax, cfg.gmax)
    b = Bounds(g, r)
    td = g + r - 1
    N = stable_threshold(g, td)
    return max(trial_base_window(b, cfg.smax),
               complex_window_demand(g, td, r),
               N + filtered_window(b),
               N + g + 1)


def trial_base_window(bounds, smax):
    """Window certifying gd, td and hd_1..hd_smax, plus one degree for the socle of K."""
    need = required_window(bounds, smax)
    if bounds.gen != NEG_INF:
        need = max(need, int(max(bounds.gen + bounds.rel, bounds.gen)) + 1)
    return need


# -- random presentations ---------------------------------------------------------

def trial_rng(seed, trial):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(trial)])))


def _coefficient(rng, F):
    if F.characteristic == 0:
        vals = F.nonzero_elements()
        return vals[int(rng.integers(len(vals)))]
    return F.element(int(rng.integers(1, F.characteristic)))


def random_presentation(rng, cfg, F=None):
    F = F if F is not None else field_from_spec(cfg.field)
    order = int(rng.integers(1, cfg.group_order + 1))
    G = cat.FiniteGroup.cyclic(order)
    gens = [int(rng.integers(0, cfg.gmax + 1)) for _ in range(int(rng.integers(1, cfg.genmax + 1)))]
    lo = min(gens)
    rels = []
    for _ in range(int(rng.integers(0, cfg.relmax + 1))):
        d = int(rng.integers(lo, max(cfg.rmax, lo) + 1))
        avail = [j for j, gd in enumerate(gens) if gd <= d]
        pool = sum(cat.hom_size(gens[j], d, order) for j in avail)
        want = min(int(rng.integers(1, 5)), pool)
        chosen = {}
        while len(chosen) < want:
            j = avail[int(rng.integers(len(avail)))]
            raw = cat._hom_raw(gens[j], d, order)
            inj, col = raw[int(rng.integers(len(raw)))]
            if (j, inj, col) not in chosen:
                chosen[(j, inj, col)] = _coefficient(rng, F)
        rels.append(Relation(d, [(j, cat.Morphism(gens[j], d, inj, col), c)
                                 for (j, inj, col), c in chosen.items()]))
    return Presentation(F, G, gens, rels, None)


# -- one trial -------------------------------------------------------------------

class _Skip(Exception):
    pass


def _faults():
    return set(filter(None, os.environ.get("FIHOM_FAULT", "").split(",")))


class TrialContext:
    """Lazily computed objects shared by the property checks of one trial."""

    def __init__(self, P, smax):
        self.P = P
        self.smax = smax
        self.bounds = P.bounds
        W0 = max(trial_base_window(self.bounds, smax), P.window or 0)
        V = compile_presentation(P, window=W0)
        self.report = invariant_report(V, smax)
        if "tor" in _faults():
            # deliberately broken Tor: lose the top degree of H_1
            h = self.report.hd[1]
            self.report.hd[1] = type(h)(h.value - 1 if h.value > 0 else NEG_INF, h.certified)
        self.gd = self.report.gd.value
        self.td = self.report.td.value
        self.hd = [h.value for h in self.report.hd]
        self.rel = max(self.hd[1], self.gd)
        N = stable_threshold(self.gd, self.td)
        W = max(W0,
                complex_window_demand(self.gd, self.td, self.rel),
                N + filtered_window(Bounds(self.gd, self.rel)),
                N + (0 if self.gd == NEG_INF else self.gd) + 1,
                (0 if self.td == NEG_INF else self.td) + 2)
        self.V = V if W == W0 else compile_presentation(P, window=W)
        self.window = W
        self._cache = {}

    def get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def split(self):
        return self.get("split", lambda: torsion_split(self.V, self.report.td))

    @property
    def complex(self):
        return self.get("complex", lambda: filtered_complex(
            self.V, gd_value=self.report.gd, td_value=self.report.td, rel=self.rel))

    @property
    def shifted(self):
        def build():
            N = stable_threshold(self.gd, self.td)
            SV = shift(self.V, N)
            return N, SV, is_filtered(SV, Bounds(self.gd, self.rel))
        return self.get("shifted", build)

    @property
    def kernel(self):
        return self.get("kernel", lambda: torsion_kernel(self.V))


def _fmt(x):
    return str(encode(x))


def check_td_bound(ctx):
    bound = ctx.gd + ctx.hd[1] - 1
    return ctx.td <= bound, f"td={_fmt(ctx.td)} gd={_fmt(ctx.gd)} hd1={_fmt(ctx.hd[1])}"


def check_hd_gd_hd1(ctx):
    for s in range(1, ctx.smax + 1):
        bound = ctx.gd + ctx.hd[1] + s - 1
        if not ctx.hd[s] <= bound:
            return False, f"hd{s}={_fmt(ctx.hd[s])} > gd+hd1+{s - 1}={_fmt(bound)}"
    return True, ""


def check_hd_gd_td(ctx):
    for s in range(1, ctx.smax + 1):
        bound = max(2 * ctx.gd - 1, ctx.td) + s
        if not ctx.hd[s] <= bound:
            return False, f"hd{s}={_fmt(ctx.hd[s])} > max(2gd-1, td)+{s}={_fmt(bound)}"
    return True, ""


def check_hd1_relation_degree(ctx):
    return ctx.hd[1] <= ctx.bounds.rel, f"hd1={_fmt(ctx.hd[1])} r={_fmt(ctx.bounds.rel)}"


def check_derivative(ctx):
    V, F = ctx.V, ctx.V.field
    DV = derivative(V)
    gd_dv = top_degree(h0_dims(DV))
    if (ctx.gd <= 0) != DV.is_zero():
        return False, f"gd={_fmt(ctx.gd)} but DV zero={DV.is_zero()}"
    if not DV.is_zero() and gd_dv != ctx.gd - 1:
        return False, f"gd(DV)={_fmt(gd_dv)} != gd-1={ctx.gd - 1}"
    K, incl = ctx.kernel
    for n in range(DV.window + 1):
        alt = K.dims[n] - V.dims[n] + V.dims[n + 1] - DV.dims[n]
        if alt:
            return False, f"four-term sequence not exact at degree {n}"
        # ker of the natural map equals ker phi_n
        kphi = subspace_of_kernel(V.phi(n), F).basis
        both = np.concatenate([incl.mats[n], kphi], axis=1)
        if kphi.shape[1] != K.dims[n] or rank(both, F) != K.dims[n]:
            return False, f"K_{n} differs from ker phi_{n}"
    return True, ""


def check_socle_degree(ctx):
    K, _ = ctx.kernel
    if ctx.td != NEG_INF:
        K = K.extend_by_zero(int(ctx.td) + 1)
    td_k = torsion_degree(K).value
    gd_k = gen_degree(K).value
    ok = ctx.td == td_k == gd_k
    return ok, f"td={_fmt(ctx.td)} td(K)={_fmt(td_k)} gd(K)={_fmt(gd_k)}"


def check_complex_homology(ctx):
    cx = ctx.complex
    tds = [t.value for t in cx.homology_td]
    if tds[0] != ctx.td:
        return False, f"td(H_-1)={_fmt(tds[0])} != td={_fmt(ctx.td)}"
    for j, t in enumerate(tds[1:], start=1):
        i = -1 - j
        if not t <= 2 * ctx.gd + 2 * i + 2:
            return False, f"td(H_{i})={_fmt(t)} > {_fmt(2 * ctx.gd + 2 * i + 2)}"
    if cx.length and not cx.length - 1 <= ctx.gd:
        return False, f"complex length {cx.length} exceeds gd+1"
    return True, f"length={cx.length} shifts={cx.shifts}"


def check_derived_regularity(ctx):
    dr = ctx.complex.derived_regularity.value
    bound = max(ctx.td, 2 * ctx.gd - 2)
    return dr <= bound, f"derived regularity {_fmt(dr)} bound {_fmt(bound)}"


def check_shift_filtered(ctx):
    N, SV, verdict = ctx.shifted
    if not verdict.certified:
        raise _Skip(f"window {SV.window} does not certify the filtration test")
    detail = f"N={N}" if verdict else (f"N={N}: degree {verdict.failure_degree} expected "
                                       f"{verdict.expected}, found {verdict.found}")
    return verdict.filtered, detail


def check_polynomial_growth(ctx):
    rep = fit_polynomial(ctx.V, ctx.report.gd, ctx.report.td)
    return rep.degree <= ctx.gd, f"stable_from={rep.stable_from} degree={_fmt(rep.degree)}"


def check_torsion_hd(ctx):
    VT = ctx.split.VT
    if ctx.td != NEG_INF:
        VT = VT.extend_by_zero(int(ctx.td) + ctx.smax + 1)
    td_t = torsion_degree(VT).value
    for s in range(1, ctx.smax + 1):
        h = top_degree(koszul_homology_dims(VT, s))
        if not h <= td_t + s:
            return False, f"hd{s}(V_T)={_fmt(h)} > td(V_T)+{s}={_fmt(td_t + s)}"
    return True, ""


def _acyclic(M, smax, label):
    """First nonzero ``H_s(M)``; nothing can live above the a priori bound."""
    b = M.bounds
    for s in range(1, smax + 1):
        upto = M.window if b is None or b.gen == NEG_INF else \
            min(M.window, int(b.gen + max(b.rel, b.gen)) + s - 1)
        dims = koszul_homology_dims(M, s, upto)
        if any(dims):
            return f"H_{s}({label}) = {dims}"
    return None


def check_filtered_acyclic(ctx):
    V = ctx.V
    mods = [(free_module(ctx.P.generators, min(V.window, max(ctx.P.generators) + ctx.smax + 1),
                         V.field, V.group), "free")]
    _, _, verdict = ctx.shifted
    for spec in verdict.witness:
        mods.append((basic_filtered(spec, spec.degree + ctx.smax + 1, V.field, V.group),
                     f"basic({spec.degree})"))
    for k, term in enumerate(ctx.complex.terms):
        mods.append((term, f"F^{-k - 1}"))
    for M, label in mods:
        bad = _acyclic(M, ctx.smax, label)
        if bad:
            return False, bad
    return True, f"{len(mods)} modules"


def check_pd_zero_filtered(ctx):
    pd = projective_dimension(ctx.V, 0, bounds=ctx.bounds)
    if pd.value != 0:
        return True, "pd > 0"
    v = is_filtered(ctx.V)
    return v.filtered, "pd = 0"


def _resolution_window(V):
    n = 0
    limit = RESOLUTION_GROUP_LIMIT[V.field.kind]
    while n < V.window and cat.wreath_order(n + 1, V.group.order) <= limit:
        n += 1
    return n


def check_resolution_independence(ctx):
    Vr = ctx.V.restrict(_resolution_window(ctx.V))
    s_top = ctx.smax
    canon = free_resolution(Vr, s_top, allow_uncertified=True)
    redund = free_resolution(Vr, s_top, redundant=True, allow_uncertified=True)
    for s in range(s_top + 1):
        a = resolution_homology_dims(canon, s)
        b = resolution_homology_dims(redund, s)
        k = koszul_homology_dims(Vr, s)
        if not a == b == k:
            return False, f"H_{s}: canonical {a}, redundant {b}, koszul {k}"
    return True, f"window {Vr.window}"


def check_bruteforce(ctx):
    if ctx.V.group.order != 1:
        raise _Skip("group not trivial")
    Vr = ctx.V.restrict(min(ctx.V.window, oracles.MAX_WINDOW))
    a, b = oracles.h0_dims(Vr), h0_dims(Vr)
    if a != b:
        return False, f"H_0 oracle {a} engine {b}"
    a, b = oracles.socle_dims(Vr), socle_dims(Vr)
    return a == b, "" if a == b else f"socle oracle {a} engine {b}"


CHECKS = {
    "td-bound": check_td_bound,
    "hd-bound-gd-hd1": check_hd_gd_hd1,
    "hd-bound-gd-td": check_hd_gd_td,
    "hd1-relation-degree": check_hd1_relation_degree,
    "derivative": check_derivative,
    "socle-degree": check_socle_degree,
    "complex-homology": check_complex_homology,
    "derived-regularity": check_derived_regularity,
    "shift-filtered": check_shift_filtered,
    "polynomial-growth": check_polynomial_growth,
    "torsion-hd": check_torsion_hd,
    "filtered-acyclic": check_filtered_acyclic,
    "pd-zero-filtered": check_pd_zero_filtered,
    "resolution-independence": check_resolution_independence,
    "bruteforce-h0-socle": check_bruteforce,
}


def run_checks(P, smax, checks=PROPERTIES):
    """Evaluate the battery on one presentation."""
    ctx = TrialContext(P, smax)
    results = {}
    for name in checks:
        try:
            ok, detail = CHECKS[name](ctx)
            results[name] = {"status": "pass" if ok else "fail", "detail": detail}
        except _Skip as e:
            results[name] = {"status": "skip", "detail": str(e)}
        except Exception as e:          # a crash inside a check is a failed check
            results[name] = {"status": "fail", "detail": f"{type(e).__name__}: {e}"}
    return ctx, results


def run_trial(cfg, index):
    rng = trial_rng(cfg.seed, index)
    P = random_presentation(rng, cfg)
    ctx, results = run_checks(P, cfg.smax, cfg.checks)
    P.window = ctx.window
    return {
        "index": index,
        "seed": [cfg.seed, index],
        "presentation": P.to_json(),
        "window": ctx.window,
        "invariants": ctx.report.to_json(),
        "results": results,
    }


def _run_trial_args(args):
    return run_trial(*args)


# -- aggregation -------------------------------------------------------------------

@dataclass
class PropertyVerdict:
    name: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    counterexample: dict | None = None

    def to_json(self):
        return asdict(self)


@dataclass
class FuzzReport:
    config: FuzzConfig
    window_demand: int
    trials: list
    verdicts: list = dc_field(default_factory=list)

    @property
    def ok(self):
        return all(v.failed == 0 for v in self.verdicts)

    def to_json(self):
        return {"config": self.config.to_json(), "window_demand": self.window_demand,
                "ok": self.ok, "verdicts": [v.to_json() for v in self.verdicts],
                "trials": self.trials}


def aggregate(cfg, trials):
    verdicts = {name: PropertyVerdict(name) for name in cfg.checks}
    for t in trials:
        for name, res in t["results"].items():
            v = verdicts[name]
            if res["status"] == "pass":
                v.passed += 1
            elif res["status"] == "skip":
                v.skipped += 1
            else:
                v.failed += 1
                if v.counterexample is None:
                    v.counterexample = {"trial": t["index"], "seed": t["seed"],
                                        "presentation": t["presentation"],
                                        "detail": res["detail"]}
    return [verdicts[name] for name in cfg.checks]


def worker_count():
    env = os.environ.get("FIHOM_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_fuzz(cfg, workers=None):
    workers = worker_count() if workers is None else workers
    args = [(cfg, i) for i in range(cfg.trials)]
    if workers <= 1 or cfg.trials <= 1:
        trials = [run_trial(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, cfg.trials)) as pool:
            trials = list(pool.map(_run_trial_args, args, chunksize=1))
    return FuzzReport(cfg, window_demand(cfg), trials, aggregate(cfg, trials))
