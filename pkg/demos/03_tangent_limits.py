"""Tangent spaces of the swallowtail stratum [2] near the self-intersection [2,2].

The [2,2] point (x+1)^2 (x-1)^2 is approached from the stratum [2] in two ways:
open the right double root into a complex pair, or the left one.  The graph
gradients db_4/db_u converge to different limits on the two sheets.
"""
import numpy as np

from strata import geomkit as gk

np.set_printoptions(precision=6, suppress=True)
ao = gk.RootConfiguration(((-1.0, 2), (1.0, 2)))

for name, i in (("sheet A (pair near +1)", 2), ("sheet B (pair near -1)", 1)):
    path = gk.complexify_path(ao, i)
    rep = gk.boundary_limit_probe(path, gk.graph_targets(path(0.1)))
    print(name)
    for eps, row in zip(rep.eps, rep.values):
        print(f"   eps={eps:.5f}  {row}")
    print("   extrapolated:", rep.limit, " cauchy ratio:", round(rep.ratio, 3))

    frame = gk.tangent_frame(gk.StratumPoint.from_config(ao), path)
    print("   limit frame margin:", round(frame.margin, 6))

# interior points: the cofactor formula against finite differences
cfg = gk.sample_stratum(gk.validate_mv((2, 1, 1), 6), seed=3).config
print("\n[2,1,1] in degree 6, cofactor formula vs finite differences:")
print(gk.graph_partials_matrix(cfg))
print(gk.finite_difference_partials(cfg))
