"""Points of the n = 4 discriminant surface (a_1 = 0), tagged by stratum.

Writes swallowtail.csv next to this script; load it in any plotting tool.
"""
import collections
import csv
import os

from strata.cli import swallowtail_points

rows = swallowtail_points(13)
print(len(rows), "points, every one with Res(P, P') = 0:", all(r["res_zero"] for r in rows))
print(collections.Counter(r["face"] for r in rows))

out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "swallowtail.csv")
with open(out, "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["a2", "a3", "a4", "mv", "face"])
    for r in rows:
        w.writerow([float(r["a2"]), float(r["a3"]), float(r["a4"]), r["mv"], r["face"]])
print("wrote", out)
