"""Exhaustive generation of decorated trees and forests up to isomorphism.

Trees are graded by edge count, which is finite for every spec even when
node arities are unbounded; optional node-count caps prune the generation
without changing the admitted set.  Classes are produced one representative
per canonical key, in key order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .pfunctor import (EndofunctorSpec, ForestKey, PForest, PTree,
                       build_ptree, representative, trivial_ptree)
from .trees import ForestDiagram, disjoint_union


@dataclass(frozen=True)
class Bound:
    """Resource bounds for enumeration and series truncation."""

    max_edges: int
    max_nodes: int | None = None

    def __post_init__(self):
        if self.max_edges < 1:
            raise ValueError("max_edges must be >= 1")
        if self.max_nodes is not None and self.max_nodes < 0:
            raise ValueError("max_nodes must be >= 0")

    def admits(self, edges: int, nodes: int) -> bool:
        return edges <= self.max_edges and (self.max_nodes is None
                                            or nodes <= self.max_nodes)

    def label(self) -> str:
        if self.max_nodes is None:
            return f"edges<={self.max_edges}"
        return f"edges<={self.max_edges},nodes<={self.max_nodes}"


def _compositions(total: int, parts: int, minimum: int) -> Iterator[tuple[int, ...]]:
    """Ordered compositions of ``total`` into ``parts`` parts, each >= minimum."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


def _strata(spec: EndofunctorSpec, bound: Bound) -> list[dict[str, PTree]]:
    """Trees grouped by exact edge count: strata[e] maps key -> representative."""
    cache_key = ("strata", bound.max_edges, bound.max_nodes)
    cached = spec._enum_cache.get(cache_key)
    if cached is not None:
        return cached
    # reuse a wider cache with the same node cap when available
    best = None
    for (tag, me, mn), prev in spec._enum_cache.items():
        if tag == "strata" and mn == bound.max_nodes and me >= bound.max_edges:
            if best is None or me < best[0]:
                best = (me, prev)
    if best is not None:
        trimmed = best[1][:bound.max_edges + 1]
        spec._enum_cache[cache_key] = trimmed
        return trimmed

    max_nodes = bound.max_nodes
    strata: list[dict[str, PTree]] = [dict() for _ in range(bound.max_edges + 1)]
    by_colour: list[dict[str, list[PTree]]] = [dict() for _ in range(bound.max_edges + 1)]

    def add(e: int, t: PTree):
        key = t.key()
        if key in strata[e]:
            return
        if max_nodes is not None and t.node_count > max_nodes:
            return
        strata[e][key] = t
        by_colour[e].setdefault(t.root_colour, []).append(t)

    for colour in spec.colours:
        add(1, trivial_ptree(spec, colour))
    for op in spec.ops:
        if op.arity == 0:
            add(1, build_ptree(spec, op.name, []))

    for e in range(2, bound.max_edges + 1):
        for op in spec.ops:
            k = op.arity
            if k == 0 or k > e - 1:
                continue
            block_sorted = spec.group_is_block_symmetric(op.name)
            for comp in _compositions(e - 1, k, 1):
                pools = [by_colour[comp[i]].get(op.ins[i], ()) for i in range(k)]
                if any(not p for p in pools):
                    continue
                for children in itertools.product(*pools):
                    if block_sorted and not _block_nondecreasing(op.ins, comp, children):
                        continue
                    add(e, build_ptree(spec, op.name, children))
    spec._enum_cache[cache_key] = strata
    return strata


def _block_nondecreasing(ins: Sequence[str], comp: Sequence[int],
                         children: Sequence[PTree]) -> bool:
    """Skip slot arrangements a fully symmetric group would identify.

    Within each maximal run of slots with equal colour and equal child edge
    count, only the arrangement with nondecreasing child keys is kept.
    """
    for i in range(1, len(children)):
        if ins[i] == ins[i - 1] and comp[i] == comp[i - 1]:
            if children[i].key() < children[i - 1].key():
                return False
    return True


def enumerate_ptrees(spec: EndofunctorSpec, bound: Bound,
                     root_colour: str | None = None,
                     leaf_profile: tuple[tuple[str, int], ...] | None = None,
                     ) -> list[PTree]:
    """One representative per tree class within the bound, sorted by key."""
    out = []
    for stratum in _strata(spec, bound)[1:]:
        out.extend(stratum.values())
    if root_colour is not None:
        out = [t for t in out if t.root_colour == root_colour]
    if leaf_profile is not None:
        want = tuple(sorted((c, m) for c, m in leaf_profile if m))
        out = [t for t in out if t.leaf_profile() == want]
    out.sort(key=lambda t: t.key())
    return out


def enumerate_pforests(spec: EndofunctorSpec, bound: Bound,
                       root_profile: tuple[tuple[str, int], ...] | None = None,
                       ) -> list[PForest]:
    """All multisets of tree classes within the total bound, sorted by key.

    With ``root_profile`` given, only forests whose component root colours
    realise exactly that profile are returned (the empty profile gives the
    empty forest alone).
    """
    trees = enumerate_ptrees(spec, bound)
    want: dict[str, int] | None = None
    if root_profile is not None:
        want = {c: m for c, m in root_profile if m}

    out: list[ForestKey] = []
    chosen: list[str] = []
    counts: dict[str, int] = {}

    def rec(start: int, edges_left: int, nodes_left: int | None):
        if want is None or counts == want:
            out.append(tuple(chosen))
        for i in range(start, len(trees)):
            t = trees[i]
            e, n, c = t.edge_count, t.node_count, t.root_colour
            if e > edges_left:
                continue
            if nodes_left is not None and n > nodes_left:
                continue
            if want is not None and counts.get(c, 0) >= want.get(c, 0):
                continue
            chosen.append(t.key())
            counts[c] = counts.get(c, 0) + 1
            rec(i, edges_left - e,
                None if nodes_left is None else nodes_left - n)
            counts[c] -= 1
            if not counts[c]:
                del counts[c]
            chosen.pop()

    # trees come in key order and indices never decrease, so every multiset
    # is produced exactly once, sorted
    rec(0, bound.max_edges, bound.max_nodes)
    out.sort()
    return [PForest(spec, keys) for keys in out]


def instantiate_forest(f: PForest) -> tuple[list[PTree], ForestDiagram, list[int]]:
    """Component instances, their disjoint-union diagram, and the root edge
    id of each component inside the union (components in key order)."""
    comps = f.trees()
    diagram = disjoint_union([t.shape for t in comps])
    roots = []
    e_off = 0
    for t in comps:
        roots.append(e_off + sorted(t.shape.edges).index(t.shape.root))
        e_off += t.edge_count
    return comps, diagram, roots


def matchings(stump: PTree, crown: PForest) -> list[dict[int, int]]:
    """All colour-respecting bijections from stump leaves to crown roots.

    Roots are the edge ids of the instantiated crown forest (components in
    key order, ids offset in that order); empty when profiles differ.
    """
    comps, diagram, comp_roots = instantiate_forest(crown)
    stump_leaves = sorted(stump.shape.leaves)
    crown_roots = list(diagram.roots)
    if len(stump_leaves) != len(crown_roots):
        return []
    root_colours = {r: t.root_colour for r, t in zip(comp_roots, comps)}
    by_colour: dict[str, list[int]] = {}
    for r in crown_roots:
        by_colour.setdefault(root_colours[r], []).append(r)
    leaves_by_colour: dict[str, list[int]] = {}
    for e in stump_leaves:
        leaves_by_colour.setdefault(stump.edge_colour[e], []).append(e)
    if {c: len(v) for c, v in by_colour.items()} != \
            {c: len(v) for c, v in leaves_by_colour.items()}:
        return []
    colour_list = sorted(leaves_by_colour)
    out: list[dict[int, int]] = []

    def rec(i: int, acc: dict[int, int]):
        if i == len(colour_list):
            out.append(dict(acc))
            return
        c = colour_list[i]
        ls = leaves_by_colour[c]
        for perm in itertools.permutations(by_colour[c]):
            for leaf, r in zip(ls, perm):
                acc[leaf] = r
            rec(i + 1, acc)
        for leaf in ls:
            acc.pop(leaf, None)

    rec(0, {})
    out.sort(key=lambda m: tuple(sorted(m.items())))
    return out


def multiset_arrangements(items: Sequence[str]) -> Iterator[tuple[str, ...]]:
    """Distinct orderings of a multiset (standard recursive generator)."""
    counts: dict[str, int] = {}
    for x in items:
        counts[x] = counts.get(x, 0) + 1
    keys = sorted(counts)
    n = len(items)
    slot: list[str] = [""] * n

    def rec(i: int) -> Iterator[tuple[str, ...]]:
        if i == n:
            yield tuple(slot)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                slot[i] = k
                yield from rec(i + 1)
                counts[k] += 1

    yield from rec(0)


def graft_class_assignments(stump: PTree, crown: PForest) -> Iterator[dict[int, PTree]]:
    """Assignments of crown component classes to stump leaves, up to
    permuting equal classes (enough to reach every graft class)."""
    by_colour: dict[str, list[str]] = {}
    for t in crown.trees():
        by_colour.setdefault(t.root_colour, []).append(t.key())
    leaves_by_colour: dict[str, list[int]] = {}
    for e in sorted(stump.shape.leaves):
        leaves_by_colour.setdefault(stump.edge_colour[e], []).append(e)
    if {c: len(v) for c, v in by_colour.items()} != \
            {c: len(v) for c, v in leaves_by_colour.items()}:
        return
    colour_list = sorted(leaves_by_colour)
    spec = stump.spec

    def rec(i: int, acc: dict[int, PTree]) -> Iterator[dict[int, PTree]]:
        if i == len(colour_list):
            yield dict(acc)
            return
        c = colour_list[i]
        ls = leaves_by_colour[c]
        for arrangement in multiset_arrangements(by_colour[c]):
            for leaf, key in zip(ls, arrangement):
                acc[leaf] = representative(spec, key)
            yield from rec(i + 1, acc)

    yield from rec(0, {})
