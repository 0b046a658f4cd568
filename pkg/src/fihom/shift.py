"""Shift functors, the derivative, the torsion kernel and torsion splitting."""

from __future__ import annotations

from dataclasses import dataclass

from . import category as cat
from .degree import NEG_INF, DegreeValue
from .linalg import Subspace, rank, subspace_of_kernel
from .modules import (Bounds, DegreewiseModule, ModuleMap, SpanBuilder, WindowError,
                      induced_quotient, induced_submodule, map_cokernel, map_kernel)


def shift(V, a=1):
    """``Sigma_a V``: precomposition with ``i -> i + a`` on objects.

    The new points ``1..a`` sit in front, so ``s_i`` acts as ``s_{i+a}`` and
    colours act on coordinate ``1 + a``.
    """
    if a < 0:
        raise ValueError("shift amount must be nonnegative")
    if a == 0:
        return V
    if a > V.window:
        raise WindowError(f"cannot shift by {a} on window {V.window}",
                          required=a, available=V.window)
    F = V.field
    N = V.window - a
    s, c, phi = [], [], []
    for n in range(N + 1):
        m = n + a
        I = F.eye(V.dims[m])
        s.append([V.act(m, ("s", i + a), I) for i in range(1, n)])
        c.append([V.apply_word(m, cat.color_at_word(g, 1 + a), I)
                  for g in range(V.group.order)] if n >= 1 else [])
        if n < N:
            phi.append(V.apply_phi(m, I))
    label = f"S{a}({V.label})" if V.label else None
    return DegreewiseModule(F, V.group, V.dims[a:], s, c, phi, bounds=V.bounds, label=label)


def natural_map(V, a=1):
    """The map ``V -> Sigma_a V`` induced by ``[n] -> [n+a], i -> i + a``."""
    if a > V.window:
        raise WindowError(f"natural map needs window >= {a}", required=a, available=V.window)
    SV = shift(V, a)
    mats = [V.morphism_matrix(cat.shift_inclusion(n, V.group, a)) for n in range(SV.window + 1)]
    return ModuleMap(V, SV, mats)


def derivative(V):
    """``D V``, the cokernel of ``V -> Sigma V`` (window drops by one)."""
    DV, _ = map_cokernel(natural_map(V), label="D")
    return DV


def torsion_kernel(V):
    """``K = ker(V -> Sigma V)``, the socle under non-invertible morphisms."""
    return map_kernel(natural_map(V), label="K")


def socle_dims(V):
    """``dim ker phi_n`` for ``n < window``."""
    F = V.field
    return [V.dims[n] - rank(V.phi(n), F) for n in range(V.window)]


def td_bound(bounds):
    """A priori bound ``g + r - 1`` on the torsion degree of a presented module."""
    if bounds is None:
        return None
    return bounds.gen + bounds.rel - 1


def torsion_degree(V, bounds=None):
    """Top degree with a nonzero socle, certified when the window reaches ``g + r``."""
    bounds = bounds if bounds is not None else V.bounds
    sd = socle_dims(V)
    value = NEG_INF
    for n in range(len(sd) - 1, -1, -1):
        if sd[n]:
            value = n
            break
    b = td_bound(bounds)
    certified = b is not None and V.window >= b + 1
    return DegreeValue(value, certified)


@dataclass
class TorsionSplit:
    VT: DegreewiseModule
    VF: DegreewiseModule
    inclusion: ModuleMap
    projection: ModuleMap
    certified: bool
    td: DegreeValue


def torsion_split(V, td=None):
    """``0 -> V_T -> V -> V_F -> 0``.

    ``v`` in ``V_n`` is torsion iff its image in degree ``td + 1`` vanishes,
    so membership is decided by one composite of structure maps.
    """
    F = V.field
    if td is None:
        td = torsion_degree(V)
    if td.is_neg_inf:
        B = 0
    else:
        B = td.value + 1
    certified = td.certified and B <= V.window
    B = min(B, V.window)
    spaces = []
    for n in range(V.window + 1):
        if n >= B:
            spaces.append(_zero_subspace(F, V.dims[n]))
            continue
        X = F.eye(V.dims[n])
        for j in range(n, B):
            X = V.apply_phi(j, X)
        spaces.append(subspace_of_kernel(X, F))
    VT = induced_submodule(V, spaces, label="T")
    quots = []
    for sp in spaces:
        b = SpanBuilder(F, sp.basis.shape[0])
        b.add_columns(sp.basis)
        quots.append(b.quotient())
    # V_F is presented by V's generators and relations plus V_T (degrees <= td)
    bounds = None
    if V.bounds is not None:
        bounds = Bounds(V.bounds.gen, max(V.bounds.rel, td.value))
    VF = induced_quotient(V, quots, bounds=bounds, label="F")
    incl = ModuleMap(VT, V, [sp.basis for sp in spaces])
    proj = ModuleMap(V, VF, [q.proj for q in quots])
    return TorsionSplit(VT, VF, incl, proj, certified, td)


def _zero_subspace(F, d):
    return Subspace(F.zeros(d, 0), [])
