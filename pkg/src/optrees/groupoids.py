"""A calculus of explicitly finite groupoids.

Groupoids are stored extensionally: objects, labelled arrows with source
and target, a total composition table on composable pairs, and identity
arrows.  Every arrow must be invertible and composition associative; the
``check`` method verifies all of it.  All constructions (pullbacks, fibres,
quotients, Grothendieck sums) build explicit groupoids whose arrow labels
are structured tuples; ``relabel`` maps them to plain integers.

Composition convention: ``compose[(f, g)]`` is "f then g", defined when
``target(f) == source(g)``.

Cardinality is the sum over components of the inverse vertex-group order,
an exact rational.  The relative cardinality of a map p: X -> B is the
vector over the components of B with coefficient ``1/|Aut x|`` at the
class of ``p(x)``, summed over components x of X; the equivalent fibrewise
formula ``|X_b| / |Aut b|`` is exercised by the tests.

Equivalences are checked by witness: a functor is an equivalence iff it
induces a bijection on components and isomorphisms of vertex groups at one
representative per component.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

ObjId = Hashable
ArrId = Hashable


class GroupoidError(ValueError):
    pass


@dataclass
class Group:
    """Finite group by multiplication table; ``mul[(a, b)]`` is "a then b"."""

    elements: tuple
    mul: dict
    identity: Hashable

    def check(self):
        els = set(self.elements)
        if self.identity not in els:
            raise GroupoidError("identity not an element")
        for a in els:
            for b in els:
                if (a, b) not in self.mul or self.mul[(a, b)] not in els:
                    raise GroupoidError("multiplication not total")
        for a in els:
            if self.mul[(self.identity, a)] != a or self.mul[(a, self.identity)] != a:
                raise GroupoidError("identity law fails")
            if not any(self.mul[(a, b)] == self.identity
                       and self.mul[(b, a)] == self.identity for b in els):
                raise GroupoidError(f"no inverse for {a!r}")
        for a in els:
            for b in els:
                for c in els:
                    if self.mul[(self.mul[(a, b)], c)] != self.mul[(a, self.mul[(b, c)])]:
                        raise GroupoidError("associativity fails")

    @property
    def order(self) -> int:
        return len(self.elements)

    def inverse(self, a):
        for b in self.elements:
            if self.mul[(a, b)] == self.identity:
                return b
        raise GroupoidError(f"no inverse for {a!r}")

    @classmethod
    def cyclic(cls, n: int) -> "Group":
        return cls(tuple(range(n)), {(a, b): (a + b) % n
                                     for a in range(n) for b in range(n)}, 0)

    @classmethod
    def from_permutations(cls, perms: Iterable[tuple[int, ...]]) -> "Group":
        els = tuple(sorted(set(perms)))
        mul = {}
        for a in els:
            for b in els:
                mul[(a, b)] = tuple(b[a[i]] for i in range(len(a)))  # a then b
        ident = tuple(range(len(els[0])))
        return cls(els, mul, ident)

    @classmethod
    def symmetric(cls, n: int) -> "Group":
        return cls.from_permutations(itertools.permutations(range(n)))

    @classmethod
    def klein(cls) -> "Group":
        els = [(0, 0), (0, 1), (1, 0), (1, 1)]
        mul = {(a, b): ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)
               for a in els for b in els}
        return cls(tuple(els), mul, (0, 0))


@dataclass
class FiniteGroupoid:
    objects: tuple
    arrows: dict  # label -> (src, dst)
    compose: dict  # (f, g) -> g.f  ("f then g")
    identities: dict  # object -> label

    _hom: dict = field(default_factory=dict, repr=False)
    _pi0: list | None = field(default=None, repr=False)
    _class_of: dict | None = field(default=None, repr=False)

    def source(self, a) -> ObjId:
        return self.arrows[a][0]

    def target(self, a) -> ObjId:
        return self.arrows[a][1]

    def hom(self, x, y) -> tuple:
        index = self._hom
        if not index:
            for a, (s, t) in self.arrows.items():
                index.setdefault((s, t), []).append(a)
            for k in index:
                index[k] = tuple(sorted(index[k], key=repr))
        return index.get((x, y), ())

    def then(self, f, g):
        """Composite "f then g"."""
        return self.compose[(f, g)]

    def inverse(self, a):
        s, t = self.arrows[a]
        for b in self.hom(t, s):
            if self.compose[(a, b)] == self.identities[s]:
                return b
        raise GroupoidError(f"arrow {a!r} has no inverse")

    # -- validation ---------------------------------------------------------
    def check(self) -> "FiniteGroupoid":
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise GroupoidError("duplicate object ids")
        for a, (s, t) in self.arrows.items():
            if s not in objs or t not in objs:
                raise GroupoidError(f"arrow {a!r} has unknown endpoint")
        if set(self.identities) != objs:
            raise GroupoidError("identities must cover exactly the objects")
        for x, e in self.identities.items():
            if self.arrows.get(e) != (x, x):
                raise GroupoidError(f"identity of {x!r} is not an endo-arrow")
        by_src: dict = {}
        for a, (s, t) in self.arrows.items():
            by_src.setdefault(s, []).append(a)
        composable = 0
        for f, (sf, tf) in self.arrows.items():
            for g in by_src.get(tf, ()):
                composable += 1
                h = self.compose.get((f, g))
                if h is None:
                    raise GroupoidError(f"composition missing on ({f!r}, {g!r})")
                if self.arrows.get(h) != (sf, self.arrows[g][1]):
                    raise GroupoidError("composite has wrong endpoints")
        if len(self.compose) != composable:
            raise GroupoidError("composition defined on non-composable pairs")
        for a, (s, t) in self.arrows.items():
            if self.compose[(self.identities[s], a)] != a:
                raise GroupoidError("left identity law fails")
            if self.compose[(a, self.identities[t])] != a:
                raise GroupoidError("right identity law fails")
        for f, (sf, tf) in self.arrows.items():
            for g in by_src.get(tf, ()):
                fg = self.compose[(f, g)]
                tg = self.arrows[g][1]
                for h in by_src.get(tg, ()):
                    if self.compose[(fg, h)] != self.compose[(f, self.compose[(g, h)])]:
                        raise GroupoidError("associativity fails")
        for a in self.arrows:
            self.inverse(a)  # raises when not invertible
        return self

    # -- components and vertex groups ---------------------------------------
    def pi0(self) -> list[tuple]:
        """Components as sorted object tuples, sorted by representative."""
        if self._pi0 is not None:
            return self._pi0
        parent = {x: x for x in self.objects}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (s, t) in self.arrows.values():
            rs, rt = find(s), find(t)
            if rs != rt:
                parent[rs] = rt
        comps: dict = {}
        for x in self.objects:
            comps.setdefault(find(x), []).append(x)
        out = sorted((tuple(sorted(c, key=repr)) for c in comps.values()),
                     key=lambda c: repr(c[0]))
        self._pi0 = out
        self._class_of = {x: c[0] for c in out for x in c}
        return out

    def class_of(self, x) -> ObjId:
        """Canonical representative (minimal object) of the class of x."""
        self.pi0()
        return self._class_of[x]

    def aut_group(self, x) -> Group:
        if x not in set(self.objects):
            raise GroupoidError(f"unknown object {x!r}")
        els = self.hom(x, x)
        mul = {(a, b): self.compose[(a, b)] for a in els for b in els}
        return Group(els, mul, self.identities[x])

    def cardinality(self) -> Fraction:
        total = Fraction(0)
        for comp in self.pi0():
            total += Fraction(1, len(self.hom(comp[0], comp[0])))
        return total

    def relabel(self) -> tuple["FiniteGroupoid", dict, dict]:
        """Copy with integer object/arrow ids; returns (copy, obj map, arrow map)."""
        omap = {x: i for i, x in enumerate(sorted(self.objects, key=repr))}
        amap = {a: i for i, a in enumerate(sorted(self.arrows, key=repr))}
        return (FiniteGroupoid(
            tuple(range(len(self.objects))),
            {amap[a]: (omap[s], omap[t]) for a, (s, t) in self.arrows.items()},
            {(amap[f], amap[g]): amap[h] for (f, g), h in self.compose.items()},
            {omap[x]: amap[e] for x, e in self.identities.items()}), omap, amap)


def _build(objects, arrows, compose, identities) -> FiniteGroupoid:
    return FiniteGroupoid(tuple(objects), dict(arrows), dict(compose),
                          dict(identities))


# ---------------------------------------------------------------------------
# basic constructors


def discrete(objects: Iterable) -> FiniteGroupoid:
    objects = tuple(objects)
    arrows = {("id", x): (x, x) for x in objects}
    compose = {(("id", x), ("id", x)): ("id", x) for x in objects}
    return _build(objects, arrows, compose, {x: ("id", x) for x in objects})


def one_object(group: Group, obj="*") -> FiniteGroupoid:
    arrows = {("g", g): (obj, obj) for g in group.elements}
    compose = {(("g", a), ("g", b)): ("g", group.mul[(a, b)])
               for a in group.elements for b in group.elements}
    return _build((obj,), arrows, compose, {obj: ("g", group.identity)})


def standard_component(objects: Sequence, group: Group) -> FiniteGroupoid:
    """Connected groupoid on the given objects with the given vertex group:
    arrows x -> y are group elements, composed by multiplying labels."""
    objects = tuple(objects)
    arrows = {(x, y, g): (x, y) for x in objects for y in objects
              for g in group.elements}
    compose = {}
    for x in objects:
        for y in objects:
            for z in objects:
                for g in group.elements:
                    for h in group.elements:
                        compose[((x, y, g), (y, z, h))] = (x, z, group.mul[(g, h)])
    idents = {x: (x, x, group.identity) for x in objects}
    return _build(objects, arrows, compose, idents)


def disjoint_union_groupoids(parts: Sequence[FiniteGroupoid]) -> FiniteGroupoid:
    objects = []
    arrows = {}
    compose = {}
    idents = {}
    for i, g in enumerate(parts):
        objects.extend((i, x) for x in g.objects)
        for a, (s, t) in g.arrows.items():
            arrows[(i, a)] = ((i, s), (i, t))
        for (f, h), k in g.compose.items():
            compose[((i, f), (i, h))] = (i, k)
        for x, e in g.identities.items():
            idents[(i, x)] = (i, e)
    return _build(objects, arrows, compose, idents)


def product_groupoid(a: FiniteGroupoid, b: FiniteGroupoid) -> FiniteGroupoid:
    objects = [(x, y) for x in a.objects for y in b.objects]
    arrows = {}
    compose = {}
    for f, (sf, tf) in a.arrows.items():
        for g, (sg, tg) in b.arrows.items():
            arrows[(f, g)] = ((sf, sg), (tf, tg))
    for (f1, f2), h1 in a.compose.items():
        for (g1, g2), h2 in b.compose.items():
            compose[((f1, g1), (f2, g2))] = (h1, h2)
    idents = {(x, y): (a.identities[x], b.identities[y])
              for x in a.objects for y in b.objects}
    return _build(objects, arrows, compose, idents)


def terminal() -> FiniteGroupoid:
    return discrete(("*",))


# ---------------------------------------------------------------------------
# maps


@dataclass
class GroupoidMap:
    dom: FiniteGroupoid
    cod: FiniteGroupoid
    obj_map: dict
    arrow_map: dict

    def check(self) -> "GroupoidMap":
        if set(self.obj_map) != set(self.dom.objects):
            raise GroupoidError("object map must cover the domain")
        if set(self.arrow_map) != set(self.dom.arrows):
            raise GroupoidError("arrow map must cover the domain arrows")
        cod_objs = set(self.cod.objects)
        for x, y in self.obj_map.items():
            if y not in cod_objs:
                raise GroupoidError(f"object {x!r} maps outside the codomain")
        for a, b in self.arrow_map.items():
            s, t = self.dom.arrows[a]
            if self.cod.arrows.get(b) != (self.obj_map[s], self.obj_map[t]):
                raise GroupoidError(f"arrow {a!r} endpoints not preserved")
        for x, e in self.dom.identities.items():
            if self.arrow_map[e] != self.cod.identities[self.obj_map[x]]:
                raise GroupoidError("identities not preserved")
        for (f, g), h in self.dom.compose.items():
            if self.cod.compose[(self.arrow_map[f], self.arrow_map[g])] != \
                    self.arrow_map[h]:
                raise GroupoidError("composition not preserved")
        return self

    def __call__(self, x):
        return self.obj_map[x]

    def on_arrow(self, a):
        return self.arrow_map[a]


def identity_map(g: FiniteGroupoid) -> GroupoidMap:
    return GroupoidMap(g, g, {x: x for x in g.objects},
                       {a: a for a in g.arrows})


def compose_maps(f: GroupoidMap, g: GroupoidMap) -> GroupoidMap:
    """f then g."""
    if f.cod is not g.dom:
        raise GroupoidError("maps not composable")
    return GroupoidMap(f.dom, g.cod,
                       {x: g.obj_map[y] for x, y in f.obj_map.items()},
                       {a: g.arrow_map[b] for a, b in f.arrow_map.items()})


def constant_map(dom: FiniteGroupoid, cod: FiniteGroupoid, obj) -> GroupoidMap:
    e = cod.identities[obj]
    return GroupoidMap(dom, cod, {x: obj for x in dom.objects},
                       {a: e for a in dom.arrows})


def name_map(g: FiniteGroupoid, obj, point: FiniteGroupoid | None = None) -> GroupoidMap:
    """The inclusion of a point hitting ``obj``."""
    pt = point if point is not None else terminal()
    return GroupoidMap(pt, g, {x: obj for x in pt.objects},
                       {a: g.identities[obj] for a in pt.arrows})


# ---------------------------------------------------------------------------
# homotopy constructions


def homotopy_pullback(f: GroupoidMap, g: GroupoidMap
                      ) -> tuple[FiniteGroupoid, GroupoidMap, GroupoidMap]:
    """Objects (x, y, phi: f x -> g y); arrows are pairs acting on both legs
    that conjugate the connecting arrow correctly."""
    if f.cod is not g.cod:
        raise GroupoidError("pullback needs a common codomain")
    X, Y, S = f.dom, g.dom, f.cod
    objects = []
    for x in X.objects:
        for y in Y.objects:
            for phi in S.hom(f.obj_map[x], g.obj_map[y]):
                objects.append((x, y, phi))
    arrows = {}
    for (x, y, phi) in objects:
        for (x2, y2, phi2) in objects:
            for alpha in X.hom(x, x2):
                fa = f.arrow_map[alpha]
                for beta in Y.hom(y, y2):
                    gb = g.arrow_map[beta]
                    # phi then g(beta) == f(alpha) then phi2
                    if S.compose[(phi, gb)] == S.compose[(fa, phi2)]:
                        arrows[((x, y, phi), (x2, y2, phi2), (alpha, beta))] = \
                            ((x, y, phi), (x2, y2, phi2))
    compose = {}
    for a1, (s1, t1) in arrows.items():
        for a2, (s2, t2) in arrows.items():
            if t1 != s2:
                continue
            alpha = X.compose[(a1[2][0], a2[2][0])]
            beta = Y.compose[(a1[2][1], a2[2][1])]
            compose[(a1, a2)] = (s1, t2, (alpha, beta))
    idents = {o: (o, o, (X.identities[o[0]], Y.identities[o[1]]))
              for o in objects}
    pb = _build(objects, arrows, compose, idents)
    p1 = GroupoidMap(pb, X, {o: o[0] for o in objects},
                     {a: a[2][0] for a in arrows})
    p2 = GroupoidMap(pb, Y, {o: o[1] for o in objects},
                     {a: a[2][1] for a in arrows})
    return pb, p1, p2


def homotopy_fiber(p: GroupoidMap, b) -> tuple[FiniteGroupoid, GroupoidMap]:
    """Pullback of p against the name of b: objects (e, phi: p e -> b)."""
    if b not in set(p.cod.objects):
        raise GroupoidError(f"unknown object {b!r}")
    E, B = p.dom, p.cod
    objects = []
    for e in E.objects:
        for phi in B.hom(p.obj_map[e], b):
            objects.append((e, phi))
    arrows = {}
    for (e, phi) in objects:
        for (e2, phi2) in objects:
            for alpha in E.hom(e, e2):
                # phi == p(alpha) then phi2
                if B.compose[(p.arrow_map[alpha], phi2)] == phi:
                    arrows[((e, phi), (e2, phi2), alpha)] = ((e, phi), (e2, phi2))
    compose = {}
    for a1, (s1, t1) in arrows.items():
        for a2, (s2, t2) in arrows.items():
            if t1 != s2:
                continue
            compose[(a1, a2)] = (s1, t2, E.compose[(a1[2], a2[2])])
    idents = {o: (o, o, E.identities[o[0]]) for o in objects}
    fib = _build(objects, arrows, compose, idents)
    incl = GroupoidMap(fib, E, {o: o[0] for o in objects},
                       {a: a[2] for a in arrows})
    return fib, incl


@dataclass
class GroupAction:
    """Right action of a finite group on a groupoid, by tables."""

    group: Group
    space: FiniteGroupoid
    obj_act: dict  # (object, group element) -> object
    arrow_act: dict  # (arrow, group element) -> arrow

    def check(self) -> "GroupAction":
        G, X = self.group, self.space
        for x in X.objects:
            if self.obj_act[(x, G.identity)] != x:
                raise GroupoidError("identity must act trivially on objects")
            for g in G.elements:
                if (x, g) not in self.obj_act:
                    raise GroupoidError("object action not total")
                for h in G.elements:
                    if self.obj_act[(self.obj_act[(x, g)], h)] != \
                            self.obj_act[(x, G.mul[(g, h)])]:
                        raise GroupoidError("object action law fails")
        for a in X.arrows:
            if self.arrow_act[(a, G.identity)] != a:
                raise GroupoidError("identity must act trivially on arrows")
            for g in G.elements:
                b = self.arrow_act.get((a, g))
                if b is None:
                    raise GroupoidError("arrow action not total")
                s, t = X.arrows[a]
                if X.arrows[b] != (self.obj_act[(s, g)], self.obj_act[(t, g)]):
                    raise GroupoidError("arrow action breaks endpoints")
        for g in G.elements:
            for (f, h), k in X.compose.items():
                if X.compose[(self.arrow_act[(f, g)], self.arrow_act[(h, g)])] != \
                        self.arrow_act[(k, g)]:
                    raise GroupoidError("group elements must act functorially")
        return self

    def act(self, x, g):
        return self.obj_act[(x, g)]


def homotopy_quotient(action: GroupAction) -> tuple[FiniteGroupoid, GroupoidMap]:
    """Objects of the space; an arrow x -> y is (g, phi: x.g -> y)."""
    G, X = action.group, action.space
    objects = tuple(X.objects)
    arrows = {}
    for x in objects:
        for g in G.elements:
            xg = action.obj_act[(x, g)]
            for y in objects:
                for phi in X.hom(xg, y):
                    arrows[(x, y, (g, phi))] = (x, y)
    compose = {}
    for a1, (x, y) in arrows.items():
        g1, phi1 = a1[2]
        for a2, (y2, z) in arrows.items():
            if y2 != y:
                continue
            g2, phi2 = a2[2]
            g = G.mul[(g1, g2)]
            # x.(g1 g2) --phi1.g2--> y.g2 --phi2--> z
            phi = X.compose[(action.arrow_act[(phi1, g2)], phi2)]
            compose[(a1, a2)] = (x, z, (g, phi))
    idents = {x: (x, x, (G.identity, X.identities[x])) for x in objects}
    quot = _build(objects, arrows, compose, idents)
    proj = GroupoidMap(X, quot, {x: x for x in X.objects},
                       {a: (X.arrows[a][0], X.arrows[a][1], (G.identity, a))
                        for a in X.arrows})
    return quot, proj


def homotopy_sum(base: FiniteGroupoid,
                 fam: Mapping[ObjId, FiniteGroupoid],
                 arrowact: Mapping[ArrId, GroupoidMap]
                 ) -> tuple[FiniteGroupoid, GroupoidMap]:
    """Total groupoid of a strictly functorial family over the base.

    Objects are pairs (b, x); an arrow (b, x) -> (b2, x2) is a pair
    (sigma: b -> b2, phi: sigma.x -> x2 in the fibre over b2).
    """
    for b in base.objects:
        if b not in fam:
            raise GroupoidError("family must cover the base objects")
    for a, (s, t) in base.arrows.items():
        m = arrowact.get(a)
        if m is None or m.dom is not fam[s] or m.cod is not fam[t]:
            raise GroupoidError("arrow action must give maps between fibres")
    for x, e in base.identities.items():
        m = arrowact[e]
        if m.obj_map != {o: o for o in fam[x].objects}:
            raise GroupoidError("identity arrows must act as identity functors")
    for (f, g), h in base.compose.items():
        mf, mg, mh = arrowact[f], arrowact[g], arrowact[h]
        for o in fam[base.arrows[f][0]].objects:
            if mg.obj_map[mf.obj_map[o]] != mh.obj_map[o]:
                raise GroupoidError("family is not strictly functorial")
        for a in fam[base.arrows[f][0]].arrows:
            if mg.arrow_map[mf.arrow_map[a]] != mh.arrow_map[a]:
                raise GroupoidError("family is not strictly functorial on arrows")

    objects = [(b, x) for b in base.objects for x in fam[b].objects]
    arrows = {}
    for (b, x) in objects:
        for sigma in base.arrows:
            sb, tb = base.arrows[sigma]
            if sb != b:
                continue
            moved = arrowact[sigma].obj_map[x]
            for (b2, x2) in objects:
                if b2 != tb:
                    continue
                for phi in fam[tb].hom(moved, x2):
                    arrows[((b, x), (b2, x2), (sigma, phi))] = ((b, x), (b2, x2))
    compose = {}
    for a1, (s1, t1) in arrows.items():
        sigma1, phi1 = a1[2]
        for a2, (s2, t2) in arrows.items():
            if t1 != s2:
                continue
            sigma2, phi2 = a2[2]
            sigma = base.compose[(sigma1, sigma2)]
            fib = fam[base.arrows[sigma2][1]]
            phi = fib.compose[(arrowact[sigma2].arrow_map[phi1], phi2)]
            compose[(a1, a2)] = (s1, t2, (sigma, phi))
    idents = {}
    for (b, x) in objects:
        idents[(b, x)] = ((b, x), (b, x),
                          (base.identities[b], fam[b].identities[x]))
    total = _build(objects, arrows, compose, idents)
    proj = GroupoidMap(total, base, {o: o[0] for o in objects},
                       {a: a[2][0] for a in arrows})
    return total, proj


def fibre_family(p: GroupoidMap) -> tuple[dict, dict, dict]:
    """The strict family of homotopy fibres of a map, with arrow transport.

    Returns (fibres, inclusions, arrowact) indexed by codomain objects and
    arrows; transport along sigma: b -> b2 sends (e, phi) to
    (e, phi then sigma).
    """
    B = p.cod
    fibres = {}
    inclusions = {}
    for b in B.objects:
        fib, incl = homotopy_fiber(p, b)
        fibres[b] = fib
        inclusions[b] = incl
    arrowact = {}
    for sigma, (b, b2) in B.arrows.items():
        src, dst = fibres[b], fibres[b2]
        omap = {}
        for (e, phi) in src.objects:
            omap[(e, phi)] = (e, B.compose[(phi, sigma)])
        amap = {}
        for a in src.arrows:
            (e, phi), (e2, phi2), alpha = a
            amap[a] = (omap[(e, phi)], omap[(e2, phi2)], alpha)
        arrowact[sigma] = GroupoidMap(src, dst, omap, amap)
    return fibres, inclusions, arrowact


# ---------------------------------------------------------------------------
# cardinality


RationalVector = dict  # component representative -> Fraction


def relative_cardinality(p: GroupoidMap) -> RationalVector:
    """Vector over the codomain components: 1/|Aut x| at the class of p(x),
    summed over components x of the domain."""
    X, B = p.dom, p.cod
    out: dict = {c[0]: Fraction(0) for c in B.pi0()}
    for comp in X.pi0():
        x = comp[0]
        out[B.class_of(p.obj_map[x])] += Fraction(1, len(X.hom(x, x)))
    return {k: v for k, v in out.items() if v}


def pushforward_cardinality(vec: RationalVector, t: GroupoidMap) -> RationalVector:
    """Sum coefficients along the map induced on components."""
    B, I = t.dom, t.cod
    out: dict = {}
    for b_class, v in vec.items():
        i_class = I.class_of(t.obj_map[b_class])
        out[i_class] = out.get(i_class, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


def vector_scale(vec: RationalVector, c: Fraction) -> RationalVector:
    return {k: c * v for k, v in vec.items() if c * v}


def vectors_equal(a: RationalVector, b: RationalVector) -> bool:
    return {k: v for k, v in a.items() if v} == {k: v for k, v in b.items() if v}


# ---------------------------------------------------------------------------
# equivalences


def is_equivalence(m: GroupoidMap) -> bool:
    """Witness check: bijective on components, vertex-group isomorphism at a
    representative of every component."""
    dom_comps = m.dom.pi0()
    cod_comps = m.cod.pi0()
    image_classes = {m.cod.class_of(m.obj_map[c[0]]) for c in dom_comps}
    if len(image_classes) != len(dom_comps) or len(dom_comps) != len(cod_comps):
        return False
    for comp in dom_comps:
        x = comp[0]
        fx = m.obj_map[x]
        auts = m.dom.hom(x, x)
        images = {m.arrow_map[a] for a in auts}
        if len(images) != len(auts):
            return False
        if len(auts) != len(m.cod.hom(fx, fx)):
            return False
    return True


# ---------------------------------------------------------------------------
# interchange documents
#
# {"objects": [id...], "arrows": [{"src","dst","label"}...],
#  "compose": [[f, g, "f then g"]...]}
# Identity arrows are not stored; they are recognised as two-sided units.


def groupoid_to_doc(g: FiniteGroupoid) -> dict:
    return {
        "objects": sorted(g.objects, key=repr),
        "arrows": [{"src": s, "dst": t, "label": a}
                   for a, (s, t) in sorted(g.arrows.items(), key=lambda kv: repr(kv[0]))],
        "compose": sorted(([f, h, k] for (f, h), k in g.compose.items()),
                          key=repr),
    }


def groupoid_from_doc(doc: Mapping) -> FiniteGroupoid:
    try:
        objects = tuple(doc["objects"])
        arrows = {a["label"]: (a["src"], a["dst"]) for a in doc["arrows"]}
        compose = {(f, h): k for f, h, k in doc["compose"]}
    except (KeyError, TypeError) as exc:
        raise GroupoidError(f"malformed groupoid document: {exc}") from None
    identities: dict = {}
    by_src: dict = {}
    by_dst: dict = {}
    for a, (s, t) in arrows.items():
        by_src.setdefault(s, []).append(a)
        by_dst.setdefault(t, []).append(a)
    for x in objects:
        units = []
        for e in arrows:
            if arrows[e] != (x, x):
                continue
            if all(compose.get((e, a)) == a for a in by_src.get(x, ())) and \
                    all(compose.get((a, e)) == a for a in by_dst.get(x, ())):
                units.append(e)
        if len(units) != 1:
            raise GroupoidError(f"object {x!r} has {len(units)} two-sided units")
        identities[x] = units[0]
    return FiniteGroupoid(objects, arrows, compose, identities).check()


def groth_equivalence(p: GroupoidMap) -> tuple[FiniteGroupoid, GroupoidMap, GroupoidMap]:
    """The total groupoid of the fibre family of p, with the comparison
    functor to the domain and its quasi-inverse."""
    E, B = p.dom, p.cod
    fibres, _, arrowact = fibre_family(p)
    total, _ = homotopy_sum(B, fibres, arrowact)
    # (b, (e, phi)) -> e ; (sigma, fibre arrow alpha) -> alpha
    fw = GroupoidMap(total, E, {o: o[1][0] for o in total.objects},
                     {a: a[2][1][2] for a in total.arrows})
    # e -> (p e, (e, id)) ; alpha -> (p alpha, transported fibre arrow)
    obj_map = {}
    for e in E.objects:
        obj_map[e] = (p.obj_map[e], (e, B.identities[p.obj_map[e]]))
    arrow_map = {}
    for alpha, (e, e2) in E.arrows.items():
        sigma = p.arrow_map[alpha]
        b2 = p.obj_map[e2]
        src_in_fibre = (e, sigma)  # transport of (e, id) along sigma
        fib_arrow = (src_in_fibre, (e2, B.identities[b2]), alpha)
        arrow_map[alpha] = (obj_map[e], obj_map[e2], (sigma, fib_arrow))
    bw = GroupoidMap(E, total, obj_map, arrow_map)
    return total, fw, bw
