"""The bialgebra of decorated trees: coproduct, Green functions, and the
substitution identity for their coefficients.

Basis and series
----------------
The algebra is free on isomorphism classes of decorated trees; a forest
class (a multiset of tree keys) is a monomial.  A :class:`Series` maps
forest monomials to exact rationals and records the truncation bound it
was computed under; binary operations insist on equal bounds so that a
truncated convolution is never silently wrong.  Coefficient queries for a
fixed monomial restrict supports instead of enlarging bounds.

Coproduct
---------
On a tree class, the coproduct sums ``crown ⊗ stump`` over all cuts, where
the stump is a root-containing subtree and the crown is the forest of
ideal subtrees over the stump's leaves.  It is multiplicative on forest
monomials.  The counit sends a monomial to 1 when all its trees are
trivial, else 0 (forced by the counit laws, which the tests verify).

Green functions
---------------
``green`` is the series with coefficient ``1/|Aut T|`` on each single-tree
monomial, optionally restricted by root colour or leaf profile.  The
coefficient of ``crown ⊗ stump`` in the coproduct of the total Green
function can be computed two independent ways:

* ``fdb_lhs_coefficient``: sum over graft classes ``T`` of (number of cuts
  of ``T`` pruning to the pair) divided by ``|Aut T|``;
* ``fdb_rhs_coefficient``: coefficient of the crown in the product of
  root-coloured Green functions indexed by the stump's leaf profile,
  divided by ``|Aut stump|``.

``verify_fdb`` checks exact equality over every pair within a budget of
(max total nodes, max edges per side), with a third cross-check that
accumulates the coproducts of all trees within the edge budget directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .enumeration import (Bound, enumerate_pforests, enumerate_ptrees,
                          graft_class_assignments)
from .pfunctor import (EMPTY_FOREST_KEY, EndofunctorSpec, ForestKey, PForest,
                       PTree, aut_order, forest_key_str, graft_decorated,
                       prune_decorated, representative)
from .trees import enumerate_cuts

Profile = tuple[tuple[str, int], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def profile_str(profile: Profile) -> str:
    return ",".join(f"{c}:{m}" for c, m in profile) if profile else "-"


class BoundMismatch(ValueError):
    """Binary series operation on series with different bounds."""


@dataclass
class Series:
    """Finitely supported map forest-monomial -> rational, with its bound."""

    spec: EndofunctorSpec
    bound: Bound
    coeffs: dict[ForestKey, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {k: Fraction(v) for k, v in self.coeffs.items() if v}

    def coefficient(self, key: ForestKey) -> Fraction:
        return self.coeffs.get(tuple(key), ZERO)

    def support(self) -> list[ForestKey]:
        return sorted(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.spec is other.spec and self.coeffs == other.coeffs

    def terms_str(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for key in sorted(self.coeffs):
            c = self.coeffs[key]
            mono = forest_key_str(key) if key else "1"
            parts.append(mono if c == 1 else f"{format_rational(c)} {mono}")
        return " + ".join(parts)


@dataclass
class TensorSeries:
    """Finitely supported map (forest, forest) -> rational."""

    spec: EndofunctorSpec
    bound: Bound
    coeffs: dict[tuple[ForestKey, ForestKey], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {k: Fraction(v) for k, v in self.coeffs.items() if v}

    def coefficient(self, left: ForestKey, right: ForestKey) -> Fraction:
        return self.coeffs.get((tuple(left), tuple(right)), ZERO)

    def support(self) -> list[tuple[ForestKey, ForestKey]]:
        return sorted(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TensorSeries):
            return NotImplemented
        return self.spec is other.spec and self.coeffs == other.coeffs

    def terms_str(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for left, right in sorted(self.coeffs):
            c = self.coeffs[(left, right)]
            mono = f"{forest_key_str(left) if left else '1'} ⊗ " \
                   f"{forest_key_str(right) if right else '1'}"
            parts.append(mono if c == 1 else f"{format_rational(c)} {mono}")
        return " + ".join(parts)


def _require_same_bound(a, b):
    if a.bound != b.bound:
        raise BoundMismatch(f"bounds differ: {a.bound} vs {b.bound}")
    if a.spec is not b.spec:
        raise BoundMismatch("series over different specs")


def _merge_key(a: ForestKey, b: ForestKey) -> ForestKey:
    return tuple(sorted(a + b))


def _forest_sizes(spec: EndofunctorSpec, key: ForestKey) -> tuple[int, int]:
    edges = nodes = 0
    for k in key:
        t = representative(spec, k)
        edges += t.edge_count
        nodes += t.node_count
    return edges, nodes


# ---------------------------------------------------------------------------
# coproduct and counit


def cut_summary(t: PTree) -> dict[tuple[ForestKey, str], int]:
    """Multiplicity of each (crown class, stump class) over the cuts of t.

    Memoised per spec by the tree's canonical key.
    """
    memo = t.spec._cut_memo
    key = t.key()
    got = memo.get(key)
    if got is not None:
        return got
    counter: dict[tuple[ForestKey, str], int] = {}
    for cut in enumerate_cuts(t.shape):
        comps, stump, _ = prune_decorated(t, cut.kept)
        pair = (tuple(sorted(c.key() for c in comps)), stump.key())
        counter[pair] = counter.get(pair, 0) + 1
    memo[key] = counter
    return counter


def delta_tree(t: PTree, bound: Bound | None = None) -> TensorSeries:
    """Coproduct of a single tree class: one term per cut."""
    if bound is None:
        bound = Bound(t.edge_count)
    coeffs = {(crown, (stump,)): Fraction(mult)
              for (crown, stump), mult in cut_summary(t).items()}
    return TensorSeries(t.spec, bound, coeffs)


def tensor_mul(a: TensorSeries, b: TensorSeries) -> TensorSeries:
    """Componentwise product, truncating each side by the common bound."""
    _require_same_bound(a, b)
    spec, bound = a.spec, a.bound
    out: dict[tuple[ForestKey, ForestKey], Fraction] = {}
    for (l1, r1), c1 in a.coeffs.items():
        for (l2, r2), c2 in b.coeffs.items():
            left = _merge_key(l1, l2)
            right = _merge_key(r1, r2)
            if not bound.admits(*_forest_sizes(spec, left)):
                continue
            if not bound.admits(*_forest_sizes(spec, right)):
                continue
            key = (left, right)
            out[key] = out.get(key, ZERO) + c1 * c2
    return TensorSeries(spec, bound, out)


def delta_monomial(spec: EndofunctorSpec, forest: PForest | ForestKey,
                   bound: Bound | None = None) -> TensorSeries:
    """Coproduct of a forest monomial: product of the tree coproducts."""
    keys = forest.keys if isinstance(forest, PForest) else tuple(forest)
    if bound is None:
        edges, _ = _forest_sizes(spec, tuple(sorted(keys)))
        bound = Bound(max(edges, 1))
    acc = TensorSeries(spec, bound, {(EMPTY_FOREST_KEY, EMPTY_FOREST_KEY): ONE})
    for k in keys:
        acc = tensor_mul(acc, delta_tree(representative(spec, k), bound))
    return acc


def delta_series(s: Series) -> TensorSeries:
    """Coproduct of a series, term by term (exact: cuts never grow sides)."""
    out = TensorSeries(s.spec, s.bound, {})
    for key, c in s.coeffs.items():
        part = delta_monomial(s.spec, key, s.bound)
        for pair, m in part.coeffs.items():
            out.coeffs[pair] = out.coeffs.get(pair, ZERO) + c * m
    out.coeffs = {k: v for k, v in out.coeffs.items() if v}
    return out


def counit_key(spec: EndofunctorSpec, key: ForestKey) -> Fraction:
    """1 when every tree in the monomial is trivial, else 0."""
    for k in key:
        if representative(spec, k).node_count != 0:
            return ZERO
    return ONE


def counit(spec: EndofunctorSpec, forest: PForest | ForestKey) -> Fraction:
    keys = forest.keys if isinstance(forest, PForest) else tuple(forest)
    return counit_key(spec, keys)


def counit_left(ts: TensorSeries) -> Series:
    """(counit ⊗ id) applied to a tensor series."""
    out: dict[ForestKey, Fraction] = {}
    for (left, right), c in ts.coeffs.items():
        if counit_key(ts.spec, left):
            out[right] = out.get(right, ZERO) + c
    return Series(ts.spec, ts.bound, out)


def counit_right(ts: TensorSeries) -> Series:
    """(id ⊗ counit) applied to a tensor series."""
    out: dict[ForestKey, Fraction] = {}
    for (left, right), c in ts.coeffs.items():
        if counit_key(ts.spec, right):
            out[left] = out.get(left, ZERO) + c
    return Series(ts.spec, ts.bound, out)


# ---------------------------------------------------------------------------
# Green functions and series arithmetic


def green(spec: EndofunctorSpec, bound: Bound,
          root_colour: str | None = None,
          leaf_profile: Profile | None = None) -> Series:
    """Sum of 1/|Aut T| times the single-tree monomial over tree classes.

    Selectors restrict to a root colour or a leaf profile before weighting.
    """
    coeffs: dict[ForestKey, Fraction] = {}
    for t in enumerate_ptrees(spec, bound, root_colour=root_colour,
                              leaf_profile=leaf_profile):
        coeffs[(t.key(),)] = Fraction(1, aut_order(t))
    return Series(spec, bound, coeffs)


def series_mul(a: Series, b: Series) -> Series:
    """Exact convolution on forest monomials, truncated by the common bound."""
    _require_same_bound(a, b)
    spec, bound = a.spec, a.bound
    out: dict[ForestKey, Fraction] = {}
    for k1, c1 in a.coeffs.items():
        for k2, c2 in b.coeffs.items():
            key = _merge_key(k1, k2)
            if not bound.admits(*_forest_sizes(spec, key)):
                continue
            out[key] = out.get(key, ZERO) + c1 * c2
    return Series(spec, bound, out)


def series_one(spec: EndofunctorSpec, bound: Bound) -> Series:
    return Series(spec, bound, {EMPTY_FOREST_KEY: ONE})


def series_pow(a: Series, n: int) -> Series:
    acc = series_one(a.spec, a.bound)
    for _ in range(n):
        acc = series_mul(acc, a)
    return acc


def series_scale(a: Series, c: Fraction) -> Series:
    return Series(a.spec, a.bound, {k: c * v for k, v in a.coeffs.items()})


def series_add(a: Series, b: Series) -> Series:
    _require_same_bound(a, b)
    out = dict(a.coeffs)
    for k, v in b.coeffs.items():
        out[k] = out.get(k, ZERO) + v
    return Series(a.spec, a.bound, out)


def series_restrict(a: Series, tree_keys: Iterable[str]) -> Series:
    """Drop monomials containing a tree class outside the allowed set."""
    allowed = set(tree_keys)
    return Series(a.spec, a.bound,
                  {k: v for k, v in a.coeffs.items() if all(x in allowed for x in k)})


def series_pow_profile(spec: EndofunctorSpec, bound: Bound, profile: Profile,
                       restrict_to: Iterable[str] | None = None) -> Series:
    """Product over colours of the root-coloured Green function powers.

    With ``restrict_to`` the factors keep only the listed tree classes, so a
    single coefficient can be read off without a global truncation.
    """
    acc = series_one(spec, bound)
    for colour, n in profile:
        g = green(spec, bound, root_colour=colour)
        if restrict_to is not None:
            g = series_restrict(g, restrict_to)
        acc = series_mul(acc, series_pow(g, n))
    return acc


# ---------------------------------------------------------------------------
# the coefficient identity, two ways


def fdb_rhs_coefficient(spec: EndofunctorSpec, crown: PForest, stump: PTree,
                        _cache: dict | None = None) -> Fraction:
    """Coefficient of crown in the leaf-profile power of Green functions,
    divided by the stump's automorphism order."""
    profile = stump.leaf_profile()
    crown_keys = crown.keys
    edges, nodes = _forest_sizes(spec, crown_keys)
    bound = Bound(max(edges, 1), nodes)
    cache_key = (profile, tuple(sorted(set(crown_keys))), bound)
    power = None
    if _cache is not None:
        power = _cache.get(cache_key)
    if power is None:
        restricted: dict[str, Fraction] = {}
        for k in set(crown_keys):
            restricted[k] = Fraction(1, aut_order(representative(spec, k)))
        acc = series_one(spec, bound)
        for colour, n in profile:
            g = Series(spec, bound,
                       {(k,): v for k, v in restricted.items()
                        if representative(spec, k).root_colour == colour})
            acc = series_mul(acc, series_pow(g, n))
        power = acc
        if _cache is not None:
            _cache[cache_key] = power
    return power.coefficient(crown_keys) / aut_order(stump)


def graft_classes(spec: EndofunctorSpec, crown: PForest, stump: PTree) -> list[str]:
    """Canonical keys of all tree classes obtained by grafting crown onto
    stump along some matching (deduplicated)."""
    seen: set[str] = set()
    for assignment in graft_class_assignments(stump, crown):
        seen.add(graft_decorated(stump, assignment).key())
    return sorted(seen)


def fdb_lhs_coefficient(spec: EndofunctorSpec, crown: PForest, stump: PTree) -> Fraction:
    """Sum over graft classes T of (#cuts of T pruning to the pair)/|Aut T|."""
    target = (crown.keys, stump.key())
    total = ZERO
    for key in graft_classes(spec, crown, stump):
        t = representative(spec, key)
        mult = cut_summary(t).get(target, 0)
        if mult:
            total += Fraction(mult, aut_order(t))
    return total


# ---------------------------------------------------------------------------
# verification report


@dataclass
class PairCheck:
    crown: ForestKey
    stump: str
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def as_doc(self) -> dict:
        return {"F": forest_key_str(self.crown), "S": self.stump,
                "lhs": format_rational(self.lhs), "rhs": format_rational(self.rhs),
                "pass": self.passed}


@dataclass
class FdbReport:
    spec_label: str
    max_total_nodes: int
    max_edges_side: int
    rooted: str | None
    pairs: list[PairCheck]
    checked: int
    failed: int
    zero_pairs: int
    cross_checked: int
    cross_failed: int

    @property
    def passed(self) -> bool:
        return self.failed == 0 and self.cross_failed == 0

    def as_doc(self) -> dict:
        return {
            "spec": self.spec_label,
            "bound": {"max_total_nodes": self.max_total_nodes,
                      "max_edges_side": self.max_edges_side},
            "rooted": self.rooted,
            "pairs": [p.as_doc() for p in self.pairs],
            "summary": {"checked": self.checked, "failed": self.failed,
                        "zero_pairs": self.zero_pairs,
                        "cross_checked": self.cross_checked,
                        "cross_failed": self.cross_failed},
        }


def _fdb_pair_space(spec: EndofunctorSpec, max_total_nodes: int,
                    max_edges_side: int, rooted: str | None):
    """Stumps, crowns indexed by (root profile, node count), and the total
    number of in-budget pairs."""
    side_bound = Bound(max_edges_side, max_total_nodes)
    stumps = enumerate_ptrees(spec, side_bound, root_colour=rooted)
    crowns = enumerate_pforests(spec, side_bound)
    by_profile: dict[Profile, list[PForest]] = {}
    crowns_by_nodes: dict[int, int] = {}
    for f in crowns:
        by_profile.setdefault(f.root_profile(), []).append(f)
        n = f.node_count()
        crowns_by_nodes[n] = crowns_by_nodes.get(n, 0) + 1
    total_pairs = 0
    for s in stumps:
        room = max_total_nodes - s.node_count
        total_pairs += sum(m for n, m in crowns_by_nodes.items() if n <= room)
    return stumps, by_profile, total_pairs


def check_fdb_pair(spec: EndofunctorSpec, crown: PForest, stump: PTree,
                   rhs_cache: dict | None = None) -> PairCheck:
    lhs = fdb_lhs_coefficient(spec, crown, stump)
    rhs = fdb_rhs_coefficient(spec, crown, stump, _cache=rhs_cache)
    return PairCheck(crown.keys, stump.key(), lhs, rhs)


def _direct_accumulation(spec: EndofunctorSpec, max_total_nodes: int,
                         max_edges: int) -> dict[tuple[ForestKey, str], Fraction]:
    """Coproduct of the Green function accumulated tree by tree."""
    acc: dict[tuple[ForestKey, str], Fraction] = {}
    for t in enumerate_ptrees(spec, Bound(max_edges, max_total_nodes)):
        w = Fraction(1, aut_order(t))
        for pair, mult in cut_summary(t).items():
            acc[pair] = acc.get(pair, ZERO) + mult * w
    return acc


def verify_fdb(spec: EndofunctorSpec, max_total_nodes: int, max_edges_side: int,
               rooted: str | None = None, jobs: int = 1,
               list_all: bool = False, mismatch_sample: int = 200) -> FdbReport:
    """Check the coefficient identity over every in-budget pair.

    Pairs whose crown root profile differs from the stump leaf profile have
    no grafts and no monomial in the profile power, so both sides vanish;
    they are counted in bulk (a deterministic sample of them is pushed
    through the full computation as a spot check) but only profile-matched
    pairs, and any failures, are listed.  A third, independent route
    accumulates the coproducts of all trees within the edge budget and must
    agree with the listed pairs whose graft size stays within it.
    """
    stumps, by_profile, total_pairs = _fdb_pair_space(
        spec, max_total_nodes, max_edges_side, rooted)
    tasks: list[tuple[PTree, PForest]] = []
    sampled: list[tuple[PTree, PForest]] = []
    per_stump = max(1, mismatch_sample // max(len(stumps), 1))
    for s in stumps:
        room = max_total_nodes - s.node_count
        profile = s.leaf_profile()
        for f in by_profile.get(profile, ()):
            if f.node_count() <= room:
                tasks.append((s, f))
        if len(sampled) < mismatch_sample:
            taken = 0
            for other, fs in by_profile.items():
                if other == profile or taken >= per_stump:
                    continue
                for f in fs:
                    if f.node_count() <= room:
                        sampled.append((s, f))
                        taken += 1
                        break

    if jobs > 1 and len(tasks) > 1:
        results = _run_pairs_parallel(spec, tasks, jobs)
    else:
        rhs_cache: dict = {}
        results = [check_fdb_pair(spec, f, s, rhs_cache) for s, f in tasks]

    results.sort(key=lambda p: (p.stump, p.crown))
    failed = sum(1 for p in results if not p.passed)

    # spot-check that sampled profile-mismatched pairs really vanish
    sample_cache: dict = {}
    for s, f in sampled:
        chk = check_fdb_pair(spec, f, s, sample_cache)
        if chk.lhs or chk.rhs or not chk.passed:
            failed += 1
            results.append(chk)

    # independent accumulation cross-check on the common support
    acc = _direct_accumulation(spec, max_total_nodes, max_edges_side)
    lhs_map = {(p.crown, p.stump): p.lhs for p in results}
    cross_checked = cross_failed = 0
    for p in results:
        e_crown, _ = _forest_sizes(spec, p.crown)
        s_rep = representative(spec, p.stump)
        graft_edges = e_crown + s_rep.edge_count - s_rep.leaf_count()
        if graft_edges <= max_edges_side:
            cross_checked += 1
            if acc.get((p.crown, p.stump), ZERO) != p.lhs:
                cross_failed += 1
    if rooted is None:
        # every accumulated pair must be among the checked ones
        for pair, val in acc.items():
            if val and pair not in lhs_map:
                cross_failed += 1

    pairs = results if list_all else [p for p in results if not p.passed
                                      or p.lhs or p.rhs]
    return FdbReport(spec.name, max_total_nodes, max_edges_side, rooted,
                     pairs, total_pairs, failed,
                     total_pairs - len(results), cross_checked, cross_failed)


# ---------------------------------------------------------------------------
# optional process-based parallelism (deterministic after sorting)

_WORKER_SPEC: EndofunctorSpec | None = None


def _worker_init(spec_doc: dict, name: str):
    global _WORKER_SPEC
    _WORKER_SPEC = EndofunctorSpec.from_dict(spec_doc, name=name)


def _worker_pair(args: tuple[str, tuple[str, ...]]) -> tuple[str, tuple[str, ...], str, str]:
    stump_key, crown_keys = args
    spec = _WORKER_SPEC
    stump = representative(spec, stump_key)
    crown = PForest(spec, crown_keys)
    chk = check_fdb_pair(spec, crown, stump)
    return (stump_key, crown_keys, str(chk.lhs), str(chk.rhs))


def _run_pairs_parallel(spec: EndofunctorSpec, tasks, jobs: int) -> list[PairCheck]:
    import multiprocessing as mp

    args = [(s.key(), f.keys) for s, f in tasks]
    try:
        ctx = mp.get_context("fork")
        with ctx.Pool(jobs, initializer=_worker_init,
                      initargs=(spec.to_dict(), spec.name)) as pool:
            raw = pool.map(_worker_pair, args, chunksize=max(1, len(args) // (jobs * 8)))
    except (ImportError, OSError, ValueError):
        rhs_cache: dict = {}
        return [check_fdb_pair(spec, f, s, rhs_cache) for s, f in tasks]
    return [PairCheck(crown, stump, Fraction(lhs), Fraction(rhs))
            for stump, crown, lhs, rhs in raw]
