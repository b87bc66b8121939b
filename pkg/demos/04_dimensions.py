"""Estimating d_f from ball growth and d_s from the low end of the spectrum.

Both estimators are biased low at these sizes; the bias shrinks as the
generation grows (the acceptance test uses graphs of several thousand nodes).
"""

from fractal_coherence import FamilySpec, analytic_dimensions, spectrum
from fractal_coherence.scaling import ball_growth, estimate_fractal_dimension, spectral_dimension_fit

for spec in (FamilySpec("tree", 6, 1), FamilySpec("tree", 5, 2), FamilySpec("vicsek", 5, 3)):
    g = spec.build()
    exact = analytic_dimensions(spec)
    d_f = estimate_fractal_dimension(ball_growth(g))
    d_s = spectral_dimension_fit(spectrum(g)).d_s
    print(f"{g.label} (N={g.num_nodes}): d_f {d_f:.3f} vs {exact.d_f:.3f}, d_s {d_s:.3f} vs {exact.d_s:.3f}")
