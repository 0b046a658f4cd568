"""Invariants of a few small FI-modules over F_101.

Run:  python demos/invariants_tour.py
"""

from fihom import (FiniteGroup, Morphism, NEG_INF, Presentation, PrimeField, Relation,
                   compile_presentation, free_module, invariant_report)

F = PrimeField(101)
G = FiniteGroup.cyclic(1)


def show(name, V, smax=2):
    rep = invariant_report(V, smax)
    hd = ", ".join(f"hd{s}={h.value}" for s, h in enumerate(rep.hd) if s)
    print(f"{name:>10}  dims={V.dims}")
    print(f"{'':>10}  gd={rep.gd.value} td={rep.td.value} {hd} certified={rep.certified}")
    g, t, h1 = rep.gd.value, rep.td.value, rep.hd[1].value
    if NEG_INF not in (g, h1):
        print(f"{'':>10}  td <= gd + hd1 - 1:  {t} <= {g + h1 - 1}")


# k0: the trivial module in degree 0, killed by every map to degree 1.
# It is the extreme case of the torsion bound: equality holds.
k0 = compile_presentation(Presentation(
    F, G, [0], [Relation(1, [(0, Morphism(0, 1, (), ()), F.one())])], window=6))
show("k0", k0, smax=3)

# Free modules have no torsion and no higher homology.
show("M(2)", free_module([2], 6, F, G))

# One generator in degree 1 whose two images in degree 2 are identified:
# dims collapse to 1 from degree 1 on.
x = lambda inj: Morphism(1, 2, inj, (0,))
V = compile_presentation(Presentation(
    F, G, [1], [Relation(2, [(0, x((1,)), F.one()), (0, x((2,)), F.neg(F.one()))])], window=6))
show("quotient", V)
