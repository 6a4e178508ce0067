"""Combinatorics of the multiplicity-vector stratification.

A stratum is a multiplicity vector together with the ambient degree n.  Its
codimension is the multiplicity surplus r = l - q and its dimension n - r.
Covering relations go from a stratum of dimension d to the adjacent strata
of dimension d + 1; they are produced by splitting a component m > 1 into
two consecutive components, or by deleting a component equal to 2.
Component indices in labels are 1-based and counted from the left
(smallest root first).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .polycore import MultiplicityVector


class MVError(ValueError):
    """A multiplicity vector that is not admissible for the ambient degree."""


class ParityError(MVError):
    pass


class LengthOverflowError(MVError):
    pass


class NonPositivePartError(MVError):
    pass


@dataclass(frozen=True, order=True)
class Stratum:
    n: int
    mv: MultiplicityVector

    @property
    def surplus(self) -> int:
        return self.mv.surplus

    codimension = surplus

    @property
    def dimension(self) -> int:
        return self.n - self.mv.surplus

    @property
    def pairs(self) -> int:
        return (self.n - self.mv.length) // 2

    @property
    def parts(self) -> tuple:
        return self.mv.parts

    def __str__(self):
        return str(self.mv)


@dataclass(frozen=True, order=True)
class CoverLabel:
    """split(i, j): r_i -> (j, r_i - j); delete2(i): drop r_i = 2."""

    kind: str
    i: int
    j: int = 0

    def apply(self, parts: tuple) -> tuple:
        k = self.i - 1
        if self.kind == "split":
            r = parts[k]
            if not 1 <= self.j < r:
                raise ValueError(f"cannot apply {self} to {list(parts)}")
            return parts[:k] + (self.j, r - self.j) + parts[k + 1:]
        if self.kind == "delete2":
            if parts[k] != 2:
                raise ValueError(f"cannot apply {self} to {list(parts)}")
            return parts[:k] + parts[k + 1:]
        raise ValueError(f"unknown label kind {self.kind!r}")

    def __str__(self):
        if self.kind == "split":
            return f"split({self.i},{self.j})"
        return f"delete2({self.i})"


@dataclass(frozen=True)
class CoveringRelation:
    lower: Stratum
    upper: Stratum
    labels: tuple


@dataclass
class StratumPoset:
    n: int
    nodes: list
    covers: list = field(default_factory=list)

    def upper_covers(self, s: Stratum) -> list:
        return [c for c in self.covers if c.lower == s]

    def reachable(self, start: Stratum) -> set:
        """All strata whose closure contains `start` (upward reachability)."""
        adj = {}
        for c in self.covers:
            adj.setdefault(c.lower, []).append(c.upper)
        seen = {start}
        todo = [start]
        while todo:
            s = todo.pop()
            for t in adj.get(s, ()):
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        return seen

    def to_json(self) -> str:
        doc = {
            "degree": self.n,
            "nodes": [
                {"mv": list(s.parts), "dim": s.dimension, "codim": s.codimension}
                for s in self.nodes
            ],
            "covers": [
                {
                    "lower": list(c.lower.parts),
                    "upper": list(c.upper.parts),
                    "labels": [str(lab) for lab in c.labels],
                }
                for c in self.covers
            ],
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_dot(self) -> str:
        lines = [f"digraph strata_n{self.n} {{", "  rankdir=BT;"]
        for s in self.nodes:
            lines.append(f'  "{s.mv}" [label="{s.mv} dim={s.dimension}"];')
        for c in self.covers:
            lab = " ".join(str(x) for x in c.labels)
            lines.append(f'  "{c.lower.mv}" -> "{c.upper.mv}" [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------

def validate_mv(parts, n: int) -> Stratum:
    parts = tuple(int(p) for p in parts)
    if n < 1:
        raise MVError(f"degree must be positive, got {n}")
    bad = [p for p in parts if p < 1]
    if bad:
        raise NonPositivePartError(f"non-positive component {bad[0]} in {list(parts)}")
    length = sum(parts)
    if length > n:
        raise LengthOverflowError(f"length {length} of {list(parts)} exceeds degree {n}")
    if (n - length) % 2:
        raise ParityError(f"degree {n} minus length {length} is odd")
    return Stratum(n, MultiplicityVector(parts))


def surplus(mv) -> int:
    parts = mv.parts if hasattr(mv, "parts") else tuple(mv)
    return sum(parts) - len(parts)


def dimension(stratum: Stratum) -> int:
    return stratum.dimension


def compositions(l: int):
    """All compositions of l in lexicographic order."""
    if l == 0:
        yield ()
        return
    for first in range(1, l + 1):
        for rest in compositions(l - first):
            yield (first,) + rest


def enumerate_mvs(n: int) -> list:
    """All strata for degree n: length descending, then lexicographic."""
    if n < 1:
        raise MVError(f"degree must be positive, got {n}")
    out = []
    for l in range(n, -1, -2):
        out.extend(Stratum(n, MultiplicityVector(c)) for c in compositions(l))
    return out


def stratum_count(n: int) -> int:
    """Closed-form node count: one composition of 0 when n is even, 2^(l-1) otherwise."""
    return (1 if n % 2 == 0 else 0) + sum(2 ** (l - 1) for l in range(n, 0, -2))


def _parts(mv) -> tuple:
    if isinstance(mv, Stratum):
        return mv.parts
    if isinstance(mv, MultiplicityVector):
        return mv.parts
    return tuple(mv)


def type_a_merges(mv) -> list:
    """Every MV obtained by summing one or more groups of consecutive components."""
    parts = _parts(mv)
    q = len(parts)
    out = []
    seen = set()
    # a coarsening is a choice of cut positions among the q - 1 gaps
    gaps = range(1, q)
    for k in range(q - 2, -1, -1):
        for cuts in combinations(gaps, k):
            bounds = (0,) + cuts + (q,)
            merged = tuple(sum(parts[a:b]) for a, b in zip(bounds, bounds[1:]))
            if merged not in seen:
                seen.add(merged)
                out.append(MultiplicityVector(merged))
    return out


def type_b_results(mv, n: int) -> list:
    """Every MV from one operation of type B (insert a 2, or raise a part by 2)."""
    parts = _parts(mv)
    if sum(parts) > n - 2:
        raise MVError(f"{list(parts)} has no complex pair left in degree {n}")
    out = []
    seen = set()
    cands = [parts[:k] + (2,) + parts[k:] for k in range(len(parts) + 1)]
    cands += [parts[:k] + (parts[k] + 2,) + parts[k + 1:] for k in range(len(parts))]
    for c in cands:
        if c not in seen:
            seen.add(c)
            out.append(MultiplicityVector(c))
    return out


def upward_labels(parts: tuple) -> list:
    labels = []
    for k, r in enumerate(parts, start=1):
        for j in range(1, r):
            labels.append(CoverLabel("split", k, j))
        if r == 2:
            labels.append(CoverLabel("delete2", k))
    return labels


def upward_neighbors(stratum: Stratum) -> list:
    """Covering relations with `stratum` as the lower element, one per upper MV."""
    grouped = {}
    for lab in upward_labels(stratum.parts):
        grouped.setdefault(lab.apply(stratum.parts), []).append(lab)
    out = []
    for upper in sorted(grouped, key=lambda p: (-sum(p), p)):
        out.append(CoveringRelation(stratum, Stratum(stratum.n, MultiplicityVector(upper)),
                                    tuple(grouped[upper])))
    return out


def in_closure(v1: Stratum, v2: Stratum) -> bool:
    """True iff v1 lies in the closure of v2.

    Searches: an optional type-A merge of v2, then exactly k type-B operations
    where l(v1) = l(v2) + 2k.
    """
    if v1.n != v2.n:
        raise ValueError("strata of different ambient degree")
    if v1.parts == v2.parts:
        return True
    diff = v1.mv.length - v2.mv.length
    if diff < 0 or diff % 2:
        return False
    k = diff // 2
    frontier = {v2.parts} | {m.parts for m in type_a_merges(v2.parts)}
    for _ in range(k):
        frontier = {b.parts for p in frontier for b in type_b_results(p, v1.n)}
    return v1.parts in frontier


def closure_by_search(v1: Stratum, v2: Stratum) -> bool:
    """Breadth-first search over single merges and type-B moves from v2."""
    if v1.parts == v2.parts:
        return True
    seen = {v2.parts}
    todo = deque([v2.parts])
    while todo:
        p = todo.popleft()
        nxt = [p[:k] + (p[k] + p[k + 1],) + p[k + 2:] for k in range(len(p) - 1)]
        if sum(p) <= v1.n - 2:
            nxt += [b.parts for b in type_b_results(p, v1.n)]
        for c in nxt:
            if c == v1.parts:
                return True
            if c not in seen:
                seen.add(c)
                todo.append(c)
    return False


def build_poset(n: int) -> StratumPoset:
    nodes = enumerate_mvs(n)
    covers = []
    for s in nodes:
        covers.extend(upward_neighbors(s))
    return StratumPoset(n, nodes, covers)
