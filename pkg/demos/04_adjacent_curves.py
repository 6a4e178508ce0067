"""Curves of the neighbouring strata through a point of [2,2] and of [4].

a_1..a_s are held fixed and each neighbouring stratum leaves a curve in the
(a_{s+1}, a_{s+2}) plane.  Slopes, sides and the vertical order are printed,
then the five lemma checks.
"""
from strata import lemmalab as ll
from strata.geomkit import RootConfiguration

for cfg in (RootConfiguration(((-1.0, 2), (1.0, 2))), RootConfiguration(((0.0, 4),))):
    setup = ll.setup_at(cfg)
    print(f"U = {setup.stratum} at {[y for y, _ in cfg.real_roots]}, plane (a_{setup.indices[0]}, a_{setup.indices[1]})")
    curves = ll.trace_all(setup)
    for c in curves:
        side = "right" if c.side > 0 else "left"
        print(f"   {str(c.label):12s} -> {list(c.upper)}  slope {c.slope:+.10f}  {side}"
              f"  (closed form {ll.predicted_slope(setup.point.config, c.label.i):+.10f})")
    for name, rep in ll.verify_all(setup).items():
        extra = f"  [{rep.note}]" if rep.note else ""
        print(f"   {name:10s} {rep.verdict}{extra}")
    # numbering the components from the left does not match the picture
    asc = {k: v.verdict for k, v in ll.verify_all(setup, order="ascending").items()}
    print("   left-to-right numbering:", asc)
    print()
