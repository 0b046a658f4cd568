"""The filtered complex and the exact Hilbert polynomial of M(2) + k0.

Run:  python demos/complex_and_growth.py
"""

from fihom import (FiniteGroup, Morphism, Presentation, PrimeField, Relation,
                   compile_presentation, direct_sum, filtered_complex, fit_polynomial,
                   free_module)
from fihom.filtered import complex_window_demand
from fihom.homology import gd
from fihom.shift import torsion_degree

F = PrimeField(101)
G = FiniteGroup.cyclic(1)

need = complex_window_demand(2, 0, 2)
k0 = compile_presentation(Presentation(
    F, G, [0], [Relation(1, [(0, Morphism(0, 1, (), ()), F.one())])], window=need))
V = direct_sum(free_module([2], need, F, G), k0)
print(f"window {need}, dims {V.dims}")
print(f"gd={gd(V).value} td={torsion_degree(V).value}")

cx = filtered_complex(V)
print(f"\ncomplex: {cx.length} filtered terms, shifts {cx.shifts}")
for j, lv in enumerate(cx.levels):
    term = f"F^{-j - 1} dims {lv.term.dims[:6]}" if lv.term is not None else "no term"
    print(f"  level {j}: {term}  td(H_{-j - 1})={lv.td.value}")
print(f"derived regularity {cx.derived_regularity.value}")

gr = fit_polynomial(V)
print(f"\ndim V_n = {gr.to_json()['poly']} for n >= {gr.stable_from}")
for n in range(V.window + 1):
    mark = "" if n >= gr.stable_from else "   (before the stable range)"
    print(f"  n={n:2d}  dim={V.dims[n]:3d}  poly={gr(n)}{mark}")
