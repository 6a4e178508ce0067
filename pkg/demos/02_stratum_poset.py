"""The stratum poset for n = 4, and closure checked three ways."""
from strata import stratlat as sl

n = 4
poset = sl.build_poset(n)
print(f"{len(poset.nodes)} strata for n={n} (formula gives {sl.stratum_count(n)})")
for s in poset.nodes:
    ups = ", ".join(f"{c.upper} via {' '.join(map(str, c.labels))}" for c in poset.upper_covers(s))
    print(f"  {str(s):10s} dim={s.dimension}  covers: {ups or '-'}")

origin = sl.validate_mv([4], n)
print("strata whose closure contains [4]:", sorted(str(s) for s in poset.reachable(origin)))

# in_closure applies merges then type-B moves directly; compare with graph search
agree = all(sl.in_closure(a, b) == sl.closure_by_search(a, b) == (b in poset.reachable(a))
            for a in poset.nodes for b in poset.nodes)
print("closure rules agree:", agree)

print()
print(sl.build_poset(2).to_dot())
