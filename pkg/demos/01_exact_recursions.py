"""Exact coherence sums from the recursions, checked against a dense eigensolve.

The recursions return rationals, so the small generations can be read off
exactly; the eigensolve is only there as a cross-check.
"""

from fractal_coherence import spectrum, tree_like, tree_S, tree_S2, vicsek, vicsek_S, vicsek_S2

print("tree-like fractal, m = 2 (Peano basin)")
for g in range(1, 5):
    S, S2 = tree_S(2, g), tree_S2(2, g)
    sp = spectrum(tree_like(2, g))
    print(f"  g={g}  N={sp.num_nodes:4d}  S={S}  (eig {sp.S:.10g})  S2={S2}  (eig {sp.S2:.10g})")

print("Vicsek fractal, v = 4")
for g in range(1, 4):
    S, S2 = vicsek_S(4, g), vicsek_S2(4, g)
    sp = spectrum(vicsek(4, g))
    print(f"  g={g}  N={sp.num_nodes:4d}  S={S}  (eig {sp.S:.10g})  S2={float(S2):.10g}  (eig {sp.S2:.10g})")

# the recursion route needs no graph at all, so very large generations are cheap
print(f"tree m=2, g=15: N = {4**15 + 1:,}, S = {float(tree_S(2, 15)):.6e}")
