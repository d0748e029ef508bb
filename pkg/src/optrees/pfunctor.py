"""Polynomial endofunctor specifications and decorated trees.

An :class:`EndofunctorSpec` is a finite set of colours together with typed
operations; each operation has an output colour, an ordered list of input
colours, and a symmetry group acting on its input positions (given by
permutation generators that must preserve input colours).

A :class:`PTree` is a tree diagram whose edges carry colours and whose
nodes carry operations, with the node's input-edge tuple giving the slot
assignment.  Isomorphisms of decorated trees are tree isomorphisms that
match colours and operations and permute each node's slots by an element
of that operation's symmetry group.

Canonical form
--------------
``canon`` computes a complete isomorphism invariant bottom-up: the code of
a node is its operation name followed by the lexicographically least
arrangement of its children's codes over the symmetry group.  Since the
group is given explicitly and closed here, the minimisation is exact.  The
canonical key doubles as the canonical string of the textual grammar

    ptree  := "_" colour? | "(" opname (":" ptree*)? ")"

so keys can be parsed back into representative trees.  On the trivial tree
the colour annotation is printed only when the spec has several colours;
leaf children inside an operation never need one (the slot fixes it).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .trees import (Cut, GrammarError, TreeDiagram, _Scanner,
                    ideal_subtree, prune)


class SpecError(ValueError):
    """Invalid endofunctor specification or decorated tree."""


class UnknownBuiltin(SpecError):
    pass


class UnknownOp(SpecError):
    pass


class ArityMismatch(SpecError):
    pass


class ColourMismatch(SpecError):
    pass


Perm = tuple[int, ...]


def _perm_mul(p: Perm, q: Perm) -> Perm:
    # (p*q)[i] = p[q[i]]: apply q first
    return tuple(p[q[i]] for i in range(len(p)))


def _close_group(gens: Sequence[Perm], arity: int) -> tuple[Perm, ...]:
    ident = tuple(range(arity))
    els = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for g in gens:
            for h in frontier:
                gh = _perm_mul(g, h)
                if gh not in els:
                    els.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return tuple(sorted(els))


@dataclass(frozen=True)
class OpType:
    name: str
    out: str
    ins: tuple[str, ...]
    sym_gens: tuple[Perm, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.ins)


class EndofunctorSpec:
    """Colours plus typed operations with input symmetry groups.

    Immutable after construction; symmetry-group closures and various
    canonical-form memo tables are cached on the instance.
    """

    def __init__(self, colours: Sequence[str], ops: Sequence[OpType], name: str = "custom"):
        self.name = name
        self.colours = tuple(colours)
        if len(set(self.colours)) != len(self.colours):
            raise SpecError("duplicate colour ids")
        if not self.colours:
            raise SpecError("a spec needs at least one colour")
        self.ops = tuple(ops)
        self.by_name: dict[str, OpType] = {}
        colour_set = set(self.colours)
        for op in self.ops:
            if op.name in self.by_name:
                raise SpecError(f"duplicate op name {op.name!r}")
            if op.out not in colour_set:
                raise SpecError(f"op {op.name!r} has unknown output colour {op.out!r}")
            for c in op.ins:
                if c not in colour_set:
                    raise SpecError(f"op {op.name!r} has unknown input colour {c!r}")
            for g in op.sym_gens:
                if sorted(g) != list(range(op.arity)):
                    raise SpecError(f"op {op.name!r}: generator {g} is not a permutation")
                for i, c in enumerate(op.ins):
                    if op.ins[g[i]] != c:
                        raise SpecError(f"op {op.name!r}: generator {g} breaks input colours")
            self.by_name[op.name] = op
        self._groups: dict[str, tuple[Perm, ...]] = {}
        self._aut_memo: dict[str, int] = {}
        self._cut_memo: dict[str, dict] = {}
        self._enum_cache: dict = {}
        self._rep_cache: dict[str, "PTree"] = {}

    @property
    def one_colour(self) -> bool:
        return len(self.colours) == 1

    def op(self, name: str) -> OpType:
        try:
            return self.by_name[name]
        except KeyError:
            raise UnknownOp(f"unknown op {name!r}") from None

    def sym_group(self, name: str) -> tuple[Perm, ...]:
        g = self._groups.get(name)
        if g is None:
            op = self.op(name)
            g = _close_group(op.sym_gens, op.arity)
            self._groups[name] = g
        return g

    def group_is_block_symmetric(self, name: str) -> bool:
        """True when the symmetry group is all colour-preserving permutations."""
        op = self.op(name)
        blocks: dict[str, int] = {}
        for c in op.ins:
            blocks[c] = blocks.get(c, 0) + 1
        full = 1
        for m in blocks.values():
            for i in range(2, m + 1):
                full *= i
        return len(self.sym_group(name)) == full

    def to_dict(self) -> dict:
        return {
            "colours": list(self.colours),
            "ops": [{"name": op.name, "out": op.out, "in": list(op.ins),
                     "sym": [list(g) for g in op.sym_gens]} for op in self.ops],
        }

    @classmethod
    def from_dict(cls, doc: Mapping, name: str = "custom") -> "EndofunctorSpec":
        try:
            colours = list(doc["colours"])
            ops = [OpType(str(o["name"]), str(o["out"]), tuple(str(c) for c in o["in"]),
                          tuple(tuple(int(i) for i in g) for g in o.get("sym", [])))
                   for o in doc["ops"]]
        except (KeyError, TypeError) as exc:
            raise SpecError(f"malformed spec document: {exc}") from None
        return cls([str(c) for c in colours], ops, name=name)


def load_spec(path: str) -> EndofunctorSpec:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return EndofunctorSpec.from_dict(doc, name=path)


def save_spec(spec: EndofunctorSpec, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


_ROT = lambda k: (tuple((i + 1) % k for i in range(k)),) if k >= 2 else ()
_ADJ = lambda k: tuple((*range(i), i + 1, i, *range(i + 2, k)) for i in range(k - 1))

BUILTIN_NAMES = ("exp", "planar", "binary", "identity", "constant",
                 "trivial", "effective", "stable", "cyclic")

_UNBOUNDED = {"exp", "planar", "effective", "stable", "cyclic"}


def builtin(name: str, max_arity: int | None = None) -> EndofunctorSpec:
    """Standard endofunctor specs on one colour.

    ``exp`` (all arities, full symmetric groups), ``planar`` (all arities,
    no symmetry), ``cyclic`` (rotation symmetry), ``binary`` (one rigid
    binary op), ``identity`` (one unary op), ``constant`` (one nullary op),
    ``trivial`` (no ops), ``effective`` (exp without the nullary op) and
    ``stable`` (exp without nullary and unary ops).  Arity-unbounded
    families require ``max_arity``.
    """
    if name not in BUILTIN_NAMES:
        raise UnknownBuiltin(f"unknown builtin spec {name!r}")
    if name in _UNBOUNDED:
        if max_arity is None:
            raise SpecError(f"builtin {name!r} requires max_arity")
        if max_arity < 0:
            raise SpecError("max_arity must be nonnegative")
    c = "o"
    label = name if max_arity is None else f"{name}({max_arity})"

    def fam(arities, sym) -> EndofunctorSpec:
        ops = [OpType(f"n{k}", c, (c,) * k, sym(k)) for k in arities]
        return EndofunctorSpec([c], ops, name=label)

    if name == "exp":
        return fam(range(0, max_arity + 1), _ADJ)
    if name == "planar":
        return fam(range(0, max_arity + 1), lambda k: ())
    if name == "cyclic":
        return fam(range(0, max_arity + 1), _ROT)
    if name == "effective":
        return fam(range(1, max_arity + 1), _ADJ)
    if name == "stable":
        return fam(range(2, max_arity + 1), _ADJ)
    if name == "binary":
        return EndofunctorSpec([c], [OpType("n2", c, (c, c))], name=label)
    if name == "identity":
        return EndofunctorSpec([c], [OpType("n1", c, (c,))], name=label)
    if name == "constant":
        return EndofunctorSpec([c], [OpType("c", c, ())], name=label)
    return EndofunctorSpec([c], [], name=label)  # trivial


# ---------------------------------------------------------------------------
# decorated trees


# Canonical keys identify isomorphism classes of decorated trees over a
# fixed spec; they are also valid strings of the decorated grammar.
CanonKey = str


class PTree:
    """A decorated tree over a fixed spec.  Immutable by convention."""

    __slots__ = ("spec", "shape", "edge_colour", "node_op", "_key", "_codes")

    def __init__(self, spec: EndofunctorSpec, shape: TreeDiagram,
                 edge_colour: dict[int, str], node_op: dict[int, str]):
        self.spec = spec
        self.shape = shape
        self.edge_colour = edge_colour
        self.node_op = node_op
        self._key: str | None = None
        self._codes: dict[int, str] | None = None

    # basic views -----------------------------------------------------------
    @property
    def root_colour(self) -> str:
        return self.edge_colour[self.shape.root]

    @property
    def edge_count(self) -> int:
        return self.shape.edge_count

    @property
    def node_count(self) -> int:
        return self.shape.node_count

    def leaf_profile(self) -> tuple[tuple[str, int], ...]:
        counts: dict[str, int] = {}
        for e in self.shape.leaves:
            c = self.edge_colour[e]
            counts[c] = counts.get(c, 0) + 1
        return tuple(sorted(counts.items()))

    def leaf_count(self) -> int:
        return len(self.shape.leaves)

    # canonical form --------------------------------------------------------
    def edge_codes(self) -> dict[int, str]:
        """Canonical code of the subtree above each edge (leaf code is '_')."""
        if self._codes is not None:
            return self._codes
        spec = self.spec
        shape = self.shape
        codes: dict[int, str] = {}
        depth = shape.node_depth()
        for n in sorted(shape.node_inputs, key=lambda n: (-depth[n], n)):
            op = self.node_op[n]
            ins = shape.node_inputs[n]
            child = tuple(codes.get(e, "_") for e in ins)
            group = spec.sym_group(op)
            if len(child) > 1 and len(group) > 1:
                child = min(tuple(child[g[i]] for i in range(len(child))) for g in group)
            body = op + (":" + "".join(child) if child else "")
            codes[shape.node_output[n]] = "(" + body + ")"
        self._codes = codes
        return codes

    def key(self) -> str:
        if self._key is None:
            root = self.shape.root
            code = self.edge_codes().get(root)
            if code is None:  # trivial tree
                code = "_" if self.spec.one_colour else "_" + self.edge_colour[root]
            self._key = code
        return self._key

    def __repr__(self):
        return f"PTree({self.key()!r})"


def canon(t: PTree) -> str:
    """Canonical key; equal keys iff decorated trees are isomorphic."""
    return t.key()


def isomorphic(t1: PTree, t2: PTree) -> bool:
    return t1.key() == t2.key()


def root_colour(t: PTree) -> str:
    return t.root_colour


def leaf_profile(t: PTree) -> tuple[tuple[str, int], ...]:
    return t.leaf_profile()


def validate_ptree(spec: EndofunctorSpec, shape: TreeDiagram,
                   edge_colour: Mapping[int, str],
                   node_op: Mapping[int, str]) -> PTree:
    """Check colour/arity compatibility of a raw decoration."""
    edge_colour = dict(edge_colour)
    node_op = dict(node_op)
    colour_set = set(spec.colours)
    if set(edge_colour) != set(shape.edges):
        raise ColourMismatch("edge colouring must cover exactly the edges")
    for e, c in edge_colour.items():
        if c not in colour_set:
            raise ColourMismatch(f"unknown colour {c!r} on edge {e}")
    if set(node_op) != set(shape.node_inputs):
        raise SpecError("node decoration must cover exactly the nodes")
    for n, opname in node_op.items():
        op = spec.op(opname)
        ins = shape.node_inputs[n]
        if len(ins) != op.arity:
            raise ArityMismatch(
                f"node {n}: op {opname!r} has arity {op.arity}, got {len(ins)} inputs")
        if edge_colour[shape.node_output[n]] != op.out:
            raise ColourMismatch(f"node {n}: output colour must be {op.out!r}")
        for i, e in enumerate(ins):
            if edge_colour[e] != op.ins[i]:
                raise ColourMismatch(
                    f"node {n}: slot {i} must have colour {op.ins[i]!r}")
    return PTree(spec, shape, edge_colour, node_op)


def trivial_ptree(spec: EndofunctorSpec, colour: str | None = None) -> PTree:
    if colour is None:
        if not spec.one_colour:
            raise ColourMismatch("colour required for multi-colour specs")
        colour = spec.colours[0]
    if colour not in spec.colours:
        raise ColourMismatch(f"unknown colour {colour!r}")
    return PTree(spec, TreeDiagram((0,), {}, {}), {0: colour}, {})


def build_ptree(spec: EndofunctorSpec, opname: str, children: Sequence[PTree]) -> PTree:
    """Tree with a root node ``opname`` and the given subtrees on its slots."""
    op = spec.op(opname)
    if len(children) != op.arity:
        raise ArityMismatch(f"op {opname!r} needs {op.arity} children")
    edges = [0]
    edge_colour = {0: op.out}
    node_inputs: dict[int, tuple[int, ...]] = {}
    node_output: dict[int, int] = {}
    node_op: dict[int, str] = {}
    e_off, n_off = 1, 0
    ins = []
    for i, ch in enumerate(children):
        if ch.root_colour != op.ins[i]:
            raise ColourMismatch(
                f"slot {i} of {opname!r} needs colour {op.ins[i]!r}, got {ch.root_colour!r}")
        e_map = {e: e_off + j for j, e in enumerate(sorted(ch.shape.edges))}
        n_map = {n: n_off + j for j, n in enumerate(sorted(ch.shape.node_inputs))}
        for e in ch.shape.edges:
            edge_colour[e_map[e]] = ch.edge_colour[e]
        for n in ch.shape.node_inputs:
            node_inputs[n_map[n]] = tuple(e_map[e] for e in ch.shape.node_inputs[n])
            node_output[n_map[n]] = e_map[ch.shape.node_output[n]]
            node_op[n_map[n]] = ch.node_op[n]
        ins.append(e_map[ch.shape.root])
        edges.extend(e_map.values())
        e_off += len(ch.shape.edges)
        n_off += len(ch.shape.node_inputs)
    root_node = n_off
    node_inputs[root_node] = tuple(ins)
    node_output[root_node] = 0
    node_op[root_node] = opname
    shape = TreeDiagram(tuple(sorted(edges)), node_inputs, node_output)
    return PTree(spec, shape, edge_colour, node_op)


def subtree_above(t: PTree, edge: int) -> PTree:
    """The decorated ideal subtree generated by an edge (ids preserved)."""
    sub = ideal_subtree(t.shape, edge)
    return PTree(t.spec, sub,
                 {e: t.edge_colour[e] for e in sub.edges},
                 {n: t.node_op[n] for n in sub.node_inputs})


# ---------------------------------------------------------------------------
# automorphism order


def aut_order(t: PTree) -> int:
    """Order of the decorated automorphism group.

    Recursively: the order at a node is the number of symmetry-group
    elements that permute slots within equal child classes, times the
    product of the child orders.  Memoised per spec by canonical code.
    """
    memo = t.spec._aut_memo
    codes = t.edge_codes()
    shape = t.shape

    def rec(edge: int) -> int:
        code = codes.get(edge)
        if code is None:
            return 1
        got = memo.get(code)
        if got is not None:
            return got
        n = shape.node_above[edge]
        ins = shape.node_inputs[n]
        child_codes = tuple(codes.get(e, "_") for e in ins)
        group = t.spec.sym_group(t.node_op[n])
        h = sum(1 for g in group
                if all(child_codes[g[i]] == child_codes[i] for i in range(len(ins))))
        total = h
        for e in ins:
            total *= rec(e)
        memo[code] = total
        return total

    return rec(shape.root)


def decorated_automorphism(t1: PTree, t2: PTree, edge_map: Mapping[int, int]) -> bool:
    """Flat check that an edge bijection is a decorated isomorphism t1 -> t2."""
    s1, s2 = t1.shape, t2.shape
    if set(edge_map) != set(s1.edges) or set(edge_map.values()) != set(s2.edges):
        return False
    if edge_map[s1.root] != s2.root:
        return False
    for e in s1.edges:
        if t1.edge_colour[e] != t2.edge_colour[edge_map[e]]:
            return False
    node_map = {}
    for n, e in s1.node_output.items():
        n2 = s2.node_above.get(edge_map[e])
        if n2 is None:
            return False
        node_map[n] = n2
    if set(node_map.values()) != set(s2.node_inputs):
        return False
    for n, n2 in node_map.items():
        if t1.node_op[n] != t2.node_op[n2]:
            return False
        ins1 = s1.node_inputs[n]
        ins2 = s2.node_inputs[n2]
        if len(ins1) != len(ins2):
            return False
        pos2 = {e: i for i, e in enumerate(ins2)}
        perm = []
        for e in ins1:
            i2 = pos2.get(edge_map[e])
            if i2 is None:
                return False
            perm.append(i2)
        if tuple(perm) not in t1.spec.sym_group(t1.node_op[n]):
            return False
    return True


def isomorphisms_brute(t1: PTree, t2: PTree) -> list[dict[int, int]]:
    """All decorated isomorphisms t1 -> t2 as explicit edge bijections.

    Recursive structural search; intended as an oracle for canonical keys
    and automorphism orders on small trees, and for orbit computations.
    """
    if (t1.edge_count != t2.edge_count or t1.node_count != t2.node_count):
        return []
    s1, s2 = t1.shape, t2.shape

    def maps_from(e1: int, e2: int) -> list[dict[int, int]]:
        if t1.edge_colour[e1] != t2.edge_colour[e2]:
            return []
        n1 = s1.node_above.get(e1)
        n2 = s2.node_above.get(e2)
        if (n1 is None) != (n2 is None):
            return []
        if n1 is None:
            return [{e1: e2}]
        if t1.node_op[n1] != t2.node_op[n2]:
            return []
        ins1 = s1.node_inputs[n1]
        ins2 = s2.node_inputs[n2]
        out: list[dict[int, int]] = []
        for g in t1.spec.sym_group(t1.node_op[n1]):
            partials: list[dict[int, int]] = [{e1: e2}]
            for i in range(len(ins1)):
                if not partials:
                    break
                subs = maps_from(ins1[i], ins2[g[i]])
                if not subs:
                    partials = []
                    break
                partials = [{**p, **s} for p in partials for s in subs]
            out.extend(partials)
        return out

    return maps_from(s1.root, s2.root)


def automorphisms(t: PTree) -> list[dict[int, int]]:
    return isomorphisms_brute(t, t)


# ---------------------------------------------------------------------------
# decorated grammar


_IDENT_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-*")


def _scan_ident(sc: _Scanner) -> str:
    chars = []
    while sc.peek() is not None and sc.peek() in _IDENT_CHARS:
        chars.append(sc.advance())
    if not chars:
        raise sc.error("expected an identifier")
    return "".join(chars)


def _parse_decorated(spec: EndofunctorSpec, sc: _Scanner,
                     expect_colour: str | None) -> PTree:
    sc.skip_ws()
    ch = sc.peek()
    if ch == "_":
        sc.advance()
        colour = None
        if sc.peek() is not None and sc.peek() in _IDENT_CHARS:
            colour = _scan_ident(sc)
        if colour is None:
            if expect_colour is not None:
                colour = expect_colour
            elif spec.one_colour:
                colour = spec.colours[0]
            else:
                raise sc.error("leaf colour required for multi-colour specs")
        if colour not in spec.colours:
            raise sc.error(f"unknown colour {colour!r}")
        if expect_colour is not None and colour != expect_colour:
            raise sc.error(f"colour {colour!r} does not match slot colour {expect_colour!r}")
        return trivial_ptree(spec, colour)
    if ch == "(":
        sc.advance()
        sc.skip_ws()
        opname = _scan_ident(sc)
        op = spec.by_name.get(opname)
        if op is None:
            raise sc.error(f"unknown op {opname!r}")
        children: list[PTree] = []
        sc.skip_ws()
        if sc.peek() == ":":
            sc.advance()
            while True:
                sc.skip_ws()
                if sc.peek() == ")":
                    break
                if sc.peek() is None:
                    raise sc.error("unexpected end of input, expected ')'")
                i = len(children)
                want = op.ins[i] if i < op.arity else None
                children.append(_parse_decorated(spec, sc, want))
        sc.skip_ws()
        if sc.peek() != ")":
            raise sc.error("expected ')'")
        sc.advance()
        if len(children) != op.arity:
            raise sc.error(
                f"op {opname!r} has arity {op.arity}, got {len(children)} children")
        if expect_colour is not None and op.out != expect_colour:
            raise sc.error(f"op {opname!r} output {op.out!r} does not match "
                           f"slot colour {expect_colour!r}")
        return build_ptree(spec, opname, children)
    if ch is None:
        raise sc.error("unexpected end of input")
    raise sc.error(f"unexpected character {ch!r}")


def parse_ptree(spec: EndofunctorSpec, text: str) -> PTree:
    sc = _Scanner(text)
    t = _parse_decorated(spec, sc, None)
    sc.skip_ws()
    if sc.peek() is not None:
        raise sc.error("trailing input after tree")
    return t


def print_ptree(t: PTree) -> str:
    """Canonical string of a decorated tree (same as its key)."""
    return t.key()


def decorate_shape(spec: EndofunctorSpec, shape: TreeDiagram) -> PTree:
    """Decorate a bare tree shape when the spec leaves no choice.

    Each node must have exactly one op of its arity; edge colours are then
    forced (and must be consistent).  Lets the undecorated grammar be used
    with specs like the arity-indexed builtins.
    """
    by_arity: dict[int, list[OpType]] = {}
    for op in spec.ops:
        by_arity.setdefault(op.arity, []).append(op)
    node_op: dict[int, str] = {}
    for n, ins in shape.node_inputs.items():
        cands = by_arity.get(len(ins), [])
        if len(cands) != 1:
            raise SpecError(
                f"cannot infer decoration: {len(cands)} ops of arity {len(ins)}")
        node_op[n] = cands[0].name
    edge_colour: dict[int, str] = {}
    for n, opname in node_op.items():
        op = spec.by_name[opname]
        edge_colour[shape.node_output[n]] = op.out
        for i, e in enumerate(shape.node_inputs[n]):
            prev = edge_colour.get(e)
            if prev is not None and prev != op.ins[i]:
                raise ColourMismatch(f"inferred colours clash on edge {e}")
            edge_colour[e] = op.ins[i]
    for e in shape.edges:
        if e not in edge_colour:
            if not spec.one_colour:
                raise ColourMismatch("cannot infer colours for a bare edge")
            edge_colour[e] = spec.colours[0]
    return validate_ptree(spec, shape, edge_colour, node_op)


def parse_ptree_or_shape(spec: EndofunctorSpec, text: str) -> PTree:
    """Parse the decorated grammar, falling back to the bare-shape grammar
    with inferred decorations."""
    from .trees import parse_tree
    try:
        return parse_ptree(spec, text)
    except GrammarError as exc:
        try:
            shape = parse_tree(text)
        except GrammarError:
            raise exc from None
        return decorate_shape(spec, shape)


def representative(spec: EndofunctorSpec, key: str) -> PTree:
    """A representative tree for a canonical key (cached per spec)."""
    rep = spec._rep_cache.get(key)
    if rep is None:
        rep = parse_ptree(spec, key)
        spec._rep_cache[key] = rep
    return rep


# ---------------------------------------------------------------------------
# forests of decorated trees


ForestKey = tuple[str, ...]

EMPTY_FOREST_KEY: ForestKey = ()


def forest_key_of(trees: Iterable[PTree]) -> ForestKey:
    return tuple(sorted(t.key() for t in trees))


def forest_key_str(key: ForestKey) -> str:
    return "·".join(key) if key else "ε"


@dataclass(frozen=True)
class PForest:
    """Multiset of decorated-tree classes, as a sorted key tuple."""

    spec: EndofunctorSpec
    keys: ForestKey

    @classmethod
    def from_trees(cls, spec: EndofunctorSpec, trees: Iterable[PTree]) -> "PForest":
        return cls(spec, forest_key_of(trees))

    @classmethod
    def from_keys(cls, spec: EndofunctorSpec, keys: Iterable[str]) -> "PForest":
        return cls(spec, tuple(sorted(keys)))

    def __str__(self):
        return forest_key_str(self.keys)

    @property
    def items(self) -> tuple[tuple[str, int], ...]:
        out: list[tuple[str, int]] = []
        for k in self.keys:
            if out and out[-1][0] == k:
                out[-1] = (k, out[-1][1] + 1)
            else:
                out.append((k, 1))
        return tuple(out)

    def trees(self) -> list[PTree]:
        return [representative(self.spec, k) for k in self.keys]

    def edge_count(self) -> int:
        return sum(t.edge_count for t in self.trees())

    def node_count(self) -> int:
        return sum(t.node_count for t in self.trees())

    def root_profile(self) -> tuple[tuple[str, int], ...]:
        counts: dict[str, int] = {}
        for t in self.trees():
            c = t.root_colour
            counts[c] = counts.get(c, 0) + 1
        return tuple(sorted(counts.items()))

    def leaf_profile(self) -> tuple[tuple[str, int], ...]:
        counts: dict[str, int] = {}
        for t in self.trees():
            for c, m in t.leaf_profile():
                counts[c] = counts.get(c, 0) + m
        return tuple(sorted(counts.items()))


def forest_mul(a: PForest, b: PForest) -> PForest:
    if a.spec is not b.spec:
        raise SpecError("forests over different specs")
    return PForest(a.spec, tuple(sorted(a.keys + b.keys)))


def aut_order_forest(f: PForest) -> int:
    """Product over classes of mult! times the tree orders to that power."""
    total = 1
    for key, mult in f.items:
        a = aut_order(representative(f.spec, key))
        for i in range(2, mult + 1):
            total *= i
        total *= a ** mult
    return total


def parse_pforest(spec: EndofunctorSpec, text: str) -> PForest:
    sc = _Scanner(text)
    sc.skip_ws()
    if sc.peek() == "ε":
        sc.advance()
        sc.skip_ws()
        if sc.peek() is not None:
            raise sc.error("trailing input after empty forest")
        return PForest(spec, ())
    trees = []
    while True:
        trees.append(_parse_decorated(spec, sc, None))
        sc.skip_ws()
        if sc.peek() == "·":
            sc.advance()
            continue
        if sc.peek() is None:
            break
        raise sc.error("expected '·' between forest components")
    return PForest.from_trees(spec, trees)


# ---------------------------------------------------------------------------
# decorated pruning and grafting


def prune_decorated(t: PTree, kept: frozenset[int]) -> tuple[list[PTree], PTree, dict[int, int]]:
    """Prune a decorated tree along a cut.

    Returns (crown components ordered by root edge id, stump, matching).
    Ids of the original tree are preserved in both parts; the matching from
    stump leaves to crown roots is the identity.
    """
    crown, stump, matching = prune(Cut(t.shape, kept))
    stump_p = PTree(t.spec, stump,
                    {e: t.edge_colour[e] for e in stump.edges},
                    {n: t.node_op[n] for n in stump.node_inputs})
    comps = []
    for r in crown.roots:
        sub = ideal_subtree(crown, r)
        comps.append(PTree(t.spec, sub,
                           {e: t.edge_colour[e] for e in sub.edges},
                           {n: t.node_op[n] for n in sub.node_inputs}))
    return comps, stump_p, matching


def graft_decorated(stump: PTree, assignment: Mapping[int, PTree]) -> PTree:
    """Graft a tree onto each leaf of the stump (leaf edge id -> tree).

    Root colours must match leaf colours.  Crown ids are renamed away from
    the stump's ids; glued edges keep the stump's leaf ids.
    """
    spec = stump.spec
    s = stump.shape
    if sorted(assignment) != sorted(s.leaves):
        raise MatchingNotBijective("assignment must cover exactly the stump leaves")
    edges = set(s.edges)
    node_inputs = dict(s.node_inputs)
    node_output = dict(s.node_output)
    edge_colour = dict(stump.edge_colour)
    node_op = dict(stump.node_op)
    fresh = max(edges | set(node_inputs), default=-1) + 1
    for leaf in sorted(assignment):
        part = assignment[leaf]
        if part.root_colour != stump.edge_colour[leaf]:
            raise ColourMismatch(
                f"leaf {leaf} has colour {stump.edge_colour[leaf]!r}, "
                f"crown root has {part.root_colour!r}")
        ps = part.shape
        e_map = {ps.root: leaf}
        for e in sorted(ps.edges):
            if e == ps.root:
                continue
            e_map[e] = fresh
            fresh += 1
        n_map = {}
        for n in sorted(ps.node_inputs):
            n_map[n] = fresh
            fresh += 1
        for e in ps.edges:
            edges.add(e_map[e])
            edge_colour[e_map[e]] = part.edge_colour[e]
        for n in ps.node_inputs:
            node_inputs[n_map[n]] = tuple(e_map[e] for e in ps.node_inputs[n])
            node_output[n_map[n]] = e_map[ps.node_output[n]]
            node_op[n_map[n]] = part.node_op[n]
    shape = TreeDiagram(tuple(sorted(edges)), node_inputs, node_output)
    return PTree(spec, shape, edge_colour, node_op)
