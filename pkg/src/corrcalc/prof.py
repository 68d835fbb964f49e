"""Profunctors between finite categories.

An element of M: C -/-> D is a heteromorphism from an object of C (its
under-object) to an object of D (its over-object). C acts on the left
(contravariantly), D on the right (covariantly). compose_prof(M, N) is the
diagrammatic composite: first M, then N.
"""

from __future__ import annotations

import itertools
import random
from collections import deque

from .fincat import (
    FinCategory, FinFunctor, discrete, generating_set, product, simplex_category, split_tag,
    tag, terminal,
)


class Profunctor:
    def __init__(self, source, target, elements, left, right, name=""):
        self.source = source
        self.target = target
        self.elements = dict(elements)
        self.left = dict(left)
        self.right = dict(right)
        self.name = name
        # set by compose_prof
        self.pair_class = None
        self.rep_pair = None
        self._fibers = None

    def __repr__(self):
        return (f"<Profunctor {self.name} {self.source.name} -/-> {self.target.name}: "
                f"{len(self.elements)} elements>")

    def __eq__(self, other):
        if not isinstance(other, Profunctor):
            return NotImplemented
        if self is other:
            return True
        return (self.elements == other.elements and self.left == other.left
                and self.right == other.right and self.source == other.source
                and self.target == other.target)

    __hash__ = None

    def __len__(self):
        return len(self.elements)

    def under(self, e):
        return self.elements[e][0]

    def over(self, e):
        return self.elements[e][1]

    def lact(self, u, e):
        """u . e for u: c' -> under(e)"""
        return self.left[(u, e)]

    def ract(self, e, v):
        """e . v for v: over(e) -> d'"""
        return self.right[(e, v)]

    def fiber(self, c, d):
        if self._fibers is None:
            table = {}
            for e, cd in self.elements.items():
                table.setdefault(cd, []).append(e)
            self._fibers = table
        return self._fibers.get((c, d), [])


def make_profunctor(source, target, elements, lact, ract, name=""):
    """Tabulate actions given as functions lact(u, e) and ract(e, v)."""
    left, right = {}, {}
    for e, (c, d) in elements.items():
        for u, (_, t) in source.morphisms.items():
            if t == c:
                left[(u, e)] = lact(u, e)
        for v, (s, _) in target.morphisms.items():
            if s == d:
                right[(e, v)] = ract(e, v)
    return Profunctor(source, target, elements, left, right, name=name)


def validate_prof(m):
    """List of violated bimodule laws; empty means m is a profunctor."""
    c, d = m.source, m.target
    bad = []
    for e, (x, y) in m.elements.items():
        if x not in c.identity or y not in d.identity:
            return [f"element {e} lies over unknown objects"]
    for e, (x, y) in m.elements.items():
        for u, (s, t) in c.morphisms.items():
            if t != x:
                continue
            r = m.left.get((u, e))
            if r not in m.elements or m.elements[r] != (s, y):
                bad.append(f"left action of {u} on {e} missing or mistyped")
        for v, (s, t) in d.morphisms.items():
            if s != y:
                continue
            r = m.right.get((e, v))
            if r not in m.elements or m.elements[r] != (x, t):
                bad.append(f"right action of {v} on {e} missing or mistyped")
    if bad:
        return bad
    for e, (x, y) in m.elements.items():
        if m.left[(c.id(x), e)] != e or m.right[(e, d.id(y))] != e:
            bad.append(f"unit law fails at {e}")
    for (u, e), e1 in m.left.items():
        for u2, (_, t) in c.morphisms.items():
            if t == c.src(u) and m.left[(u2, e1)] != m.left[(c.comp(u, u2), e)]:
                bad.append(f"left associativity fails at {u2}, {u}, {e}")
        for v, (s, _) in d.morphisms.items():
            if s == m.over(e) and m.right[(e1, v)] != m.left[(u, m.right[(e, v)])]:
                bad.append(f"actions do not commute at {u}, {e}, {v}")
    for (e, v), e1 in m.right.items():
        for v2, (s, _) in d.morphisms.items():
            if s == d.tgt(v) and m.right[(e1, v2)] != m.right[(e, d.comp(v2, v))]:
                bad.append(f"right associativity fails at {e}, {v}, {v2}")
    return bad


def empty_profunctor(c, d):
    return Profunctor(c, d, {}, {}, {}, name="0")


def identity_prof(c):
    return make_profunctor(c, c, dict(c.morphisms),
                           lambda u, f: c.comp(f, u), lambda f, v: c.comp(v, f), name="id")


def companion(f):
    """f_!: C -/-> D with elements h: f(c) -> d, stored as (c, h)."""
    c, d = f.source, f.target
    elements = {tag(x, h): (x, d.tgt(h)) for x in c.objects
                for h in d.morphisms if d.src(h) == f.ob(x)}

    def lact(u, e):
        _, h = split_tag(e)
        return tag(c.src(u), d.comp(h, f.mor(u)))

    def ract(e, v):
        x, h = split_tag(e)
        return tag(x, d.comp(v, h))

    return make_profunctor(c, d, elements, lact, ract, name=f"{f.name}_!")


def conjoint(f):
    """f^*: D -/-> C with elements k: d -> f(c), stored as (c, k)."""
    c, d = f.source, f.target
    elements = {tag(x, k): (d.src(k), x) for x in c.objects
                for k in d.morphisms if d.tgt(k) == f.ob(x)}

    def lact(w, e):
        x, k = split_tag(e)
        return tag(x, d.comp(k, w))

    def ract(e, u):
        _, k = split_tag(e)
        return tag(c.tgt(u), d.comp(f.mor(u), k))

    return make_profunctor(d, c, elements, lact, ract, name=f"{f.name}^*")


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def compose_prof(m, n):
    """Coend composite of M: C -/-> D and N: D -/-> E.

    Elements are classes of pairs (x, y) with over(x) = under(y) modulo
    (x.g, y) ~ (x, g.y); a class is named by its smallest pair id.
    """
    if not (m.target is n.source or m.target == n.source):
        raise ValueError("middle categories differ")
    mid = m.target
    by_under = {}
    for y, (a, _) in n.elements.items():
        by_under.setdefault(a, []).append(y)
    pairs = {}
    for x, (_, b) in m.elements.items():
        for y in by_under.get(b, ()):
            pairs[(x, y)] = tag(x, y)
    uf = _UnionFind(list(pairs.values()))
    for x, (_, b) in m.elements.items():
        for g, (s, t) in mid.morphisms.items():
            if s != b:
                continue
            xg = m.right[(x, g)]
            for y in by_under.get(t, ()):
                uf.union(pairs[(xg, y)], pairs[(x, n.left[(g, y)])])
    pair_class = {p: uf.find(pid) for p, pid in pairs.items()}
    rep_pair = {}
    for p, cls in pair_class.items():
        if pairs[p] == cls:
            rep_pair[cls] = p
    elements = {cls: (m.under(x), n.over(y)) for cls, (x, y) in rep_pair.items()}
    left, right = {}, {}
    for cls, (x, y) in rep_pair.items():
        c0, e0 = elements[cls]
        for u, (_, t) in m.source.morphisms.items():
            if t == c0:
                left[(u, cls)] = pair_class[(m.left[(u, x)], y)]
        for v, (s, _) in n.target.morphisms.items():
            if s == e0:
                right[(cls, v)] = pair_class[(x, n.right[(y, v)])]
    out = Profunctor(m.source, n.target, elements, left, right,
                     name=f"({m.name};{n.name})")
    out.pair_class = pair_class
    out.rep_pair = rep_pair
    return out


# -------------------------------------------------------------- morphisms

class ProfMorphism:
    def __init__(self, source, target, mapping):
        self.source = source
        self.target = target
        self.map = dict(mapping)

    def __repr__(self):
        return f"<ProfMorphism {self.source.name} => {self.target.name}>"

    def __eq__(self, other):
        if not isinstance(other, ProfMorphism):
            return NotImplemented
        return self.map == other.map

    __hash__ = None

    def __call__(self, e):
        return self.map[e]


def validate_prof_morphism(a):
    m, n = a.source, a.target
    bad = []
    for e in m.elements:
        x = a.map.get(e)
        if x not in n.elements or n.elements[x] != m.elements[e]:
            bad.append(f"{e} not sent to an element over the same objects")
    if bad:
        return bad
    for (u, e), r in m.left.items():
        if a.map[r] != n.left[(u, a.map[e])]:
            bad.append(f"left action of {u} not preserved at {e}")
    for (e, v), r in m.right.items():
        if a.map[r] != n.right[(a.map[e], v)]:
            bad.append(f"right action of {v} not preserved at {e}")
    return bad


def is_iso_morphism(a):
    return (not validate_prof_morphism(a)
            and sorted(a.map.values()) == sorted(a.target.elements))


def identity_morphism(m):
    return ProfMorphism(m, m, {e: e for e in m.elements})


def vcompose(b, a):
    """b after a."""
    return ProfMorphism(a.source, b.target, {e: b.map[a.map[e]] for e in a.source.elements})


def inverse_morphism(a):
    inv = {v: k for k, v in a.map.items()}
    return ProfMorphism(a.target, a.source, {e: inv[e] for e in a.target.elements})


def whisker_right(a, n, src=None, tgt=None):
    """a;N : compose(M, N) => compose(M', N)"""
    src = src or compose_prof(a.source, n)
    tgt = tgt or compose_prof(a.target, n)
    return ProfMorphism(src, tgt, {cls: tgt.pair_class[(a.map[x], y)]
                                   for cls, (x, y) in src.rep_pair.items()})


def whisker_left(m, b, src=None, tgt=None):
    """M;b : compose(M, N) => compose(M, N')"""
    src = src or compose_prof(m, b.source)
    tgt = tgt or compose_prof(m, b.target)
    return ProfMorphism(src, tgt, {cls: tgt.pair_class[(x, b.map[y])]
                                   for cls, (x, y) in src.rep_pair.items()})


def associator(m, n, p):
    """compose(compose(M, N), P) => compose(M, compose(N, P))"""
    mn = compose_prof(m, n)
    np_ = compose_prof(n, p)
    src = compose_prof(mn, p)
    tgt = compose_prof(m, np_)
    mapping = {}
    for cls, (xy, z) in src.rep_pair.items():
        x, y = mn.rep_pair[xy]
        mapping[cls] = tgt.pair_class[(x, np_.pair_class[(y, z)])]
    return ProfMorphism(src, tgt, mapping)


def associator_inverse(m, n, p):
    mn = compose_prof(m, n)
    np_ = compose_prof(n, p)
    src = compose_prof(m, np_)
    tgt = compose_prof(mn, p)
    mapping = {}
    for cls, (x, yz) in src.rep_pair.items():
        y, z = np_.rep_pair[yz]
        mapping[cls] = tgt.pair_class[(mn.pair_class[(x, y)], z)]
    return ProfMorphism(src, tgt, mapping)


def left_unitor(m):
    """compose(id, M) => M, [u, x] -> u.x"""
    src = compose_prof(identity_prof(m.source), m)
    return ProfMorphism(src, m, {cls: m.left[(u, x)] for cls, (u, x) in src.rep_pair.items()})


def left_unitor_inverse(m):
    tgt = compose_prof(identity_prof(m.source), m)
    c = m.source
    return ProfMorphism(m, tgt, {x: tgt.pair_class[(c.id(m.under(x)), x)] for x in m.elements})


def right_unitor(m):
    """compose(M, id) => M, [x, v] -> x.v"""
    src = compose_prof(m, identity_prof(m.target))
    return ProfMorphism(src, m, {cls: m.right[(x, v)] for cls, (x, v) in src.rep_pair.items()})


def right_unitor_inverse(m):
    tgt = compose_prof(m, identity_prof(m.target))
    d = m.target
    return ProfMorphism(m, tgt, {x: tgt.pair_class[(x, d.id(m.over(x)))] for x in m.elements})


# --------------------------------------------------- equivariant map search

def _search_maps(m, n, bijective, limit=None):
    if m.source != n.source or m.target != n.target:
        raise ValueError("profunctors are not parallel")
    if bijective:
        if len(m.elements) != len(n.elements):
            return []
        fm = sorted(len(v) for v in _fiber_table(m).values())
        fn = sorted(len(v) for v in _fiber_table(n).values())
        if fm != fn or set(_fiber_table(m)) != set(_fiber_table(n)):
            return []
    moves = {e: [] for e in m.elements}
    for (u, e), r in m.left.items():
        moves[e].append((r, "l", u))
    for (e, v), r in m.right.items():
        moves[e].append((r, "r", v))
    order = sorted(m.elements)
    out = []

    def propagate(assign, used, e, x):
        assign[e] = x
        if bijective:
            used.add(x)
        queue = deque([e])
        while queue:
            a = queue.popleft()
            b = assign[a]
            for r, side, g in moves[a]:
                img = n.left[(g, b)] if side == "l" else n.right[(b, g)]
                if r in assign:
                    if assign[r] != img:
                        return False
                else:
                    if bijective and img in used:
                        return False
                    assign[r] = img
                    if bijective:
                        used.add(img)
                    queue.append(r)
        return True

    def rec(assign, used):
        if limit is not None and len(out) >= limit:
            return
        free = next((e for e in order if e not in assign), None)
        if free is None:
            out.append(ProfMorphism(m, n, assign))
            return
        for x in n.fiber(*m.elements[free]):
            if bijective and x in used:
                continue
            a2, u2 = dict(assign), set(used)
            if propagate(a2, u2, free, x):
                rec(a2, u2)

    rec({}, set())
    return out


def _fiber_table(m):
    m.fiber(None, None)
    return m._fibers


def prof_nats(m, n):
    """All equivariant maps M => N."""
    return _search_maps(m, n, bijective=False)


def find_prof_iso(m, n):
    """An isomorphism M => N, or None."""
    found = _search_maps(m, n, bijective=True, limit=1)
    return found[0] if found else None


def are_isomorphic(m, n):
    return find_prof_iso(m, n) is not None


# ------------------------------------------------ companions and adjunction

def companion_functoriality(f, g):
    """Witness compose(f_!, g_!) => (g.f)_!, [(c, h), (d, k)] -> (c, k.g(h))"""
    from .fincat import compose_functors
    e = g.target
    src = compose_prof(companion(f), companion(g))
    tgt = companion(compose_functors(g, f))
    mapping = {}
    for cls, (x, y) in src.rep_pair.items():
        c, h = split_tag(x)
        _, k = split_tag(y)
        mapping[cls] = tag(c, e.comp(k, g.mor(h)))
    return ProfMorphism(src, tgt, mapping)


def conjoint_functoriality(f, g):
    """Witness compose(g^*, f^*) => (g.f)^*, [(d, k), (c, h)] -> (c, g(h).k)"""
    from .fincat import compose_functors
    e = g.target
    src = compose_prof(conjoint(g), conjoint(f))
    tgt = conjoint(compose_functors(g, f))
    mapping = {}
    for cls, (x, y) in src.rep_pair.items():
        _, k = split_tag(x)
        c, h = split_tag(y)
        mapping[cls] = tag(c, e.comp(g.mor(h), k))
    return ProfMorphism(src, tgt, mapping)


class AdjunctionCheck:
    def __init__(self, unit, counit, left_triangle, right_triangle, problems):
        self.unit = unit
        self.counit = counit
        self.left_triangle = left_triangle
        self.right_triangle = right_triangle
        self.problems = problems

    @property
    def ok(self):
        return self.left_triangle and self.right_triangle and not self.problems

    def __repr__(self):
        return (f"<AdjunctionCheck ok={self.ok} left={self.left_triangle} "
                f"right={self.right_triangle}>")


def adjunction_unit(f):
    """id_C => compose(f_!, f^*), u -> [(c, id_fc), (c', f(u))]"""
    c, d = f.source, f.target
    lo, ro = companion(f), conjoint(f)
    tgt = compose_prof(lo, ro)
    idc = identity_prof(c)
    mapping = {}
    for u, (x, y) in c.morphisms.items():
        mapping[u] = tgt.pair_class[(tag(x, d.id(f.ob(x))), tag(y, f.mor(u)))]
    return ProfMorphism(idc, tgt, mapping)


def adjunction_counit(f):
    """compose(f^*, f_!) => id_D, [k, h] -> h.k"""
    d = f.target
    src = compose_prof(conjoint(f), companion(f))
    mapping = {}
    for cls, (x, y) in src.rep_pair.items():
        _, k = split_tag(x)
        _, h = split_tag(y)
        mapping[cls] = d.comp(h, k)
    return ProfMorphism(src, identity_prof(d), mapping)


def check_adjunction(f):
    """Verify companion -| conjoint by chasing every element through both
    triangle composites."""
    lo, ro = companion(f), conjoint(f)
    eta, eps = adjunction_unit(f), adjunction_counit(f)
    problems = []
    for name, a in (("unit", eta), ("counit", eps)):
        for b in validate_prof_morphism(a):
            problems.append(f"{name}: {b}")
    # L => id;L => (L;R);L => L;(R;L) => L;id => L
    t1 = vcompose(right_unitor(lo),
                  vcompose(whisker_left(lo, eps),
                           vcompose(associator(lo, ro, lo),
                                    vcompose(whisker_right(eta, lo), left_unitor_inverse(lo)))))
    # R => R;id => R;(L;R) => (R;L);R => id;R => R
    t2 = vcompose(left_unitor(ro),
                  vcompose(whisker_right(eps, ro),
                           vcompose(associator_inverse(ro, lo, ro),
                                    vcompose(whisker_left(ro, eta), right_unitor_inverse(ro)))))
    left_ok = t1.map == identity_morphism(lo).map
    right_ok = t2.map == identity_morphism(ro).map
    return AdjunctionCheck(eta, eps, left_ok, right_ok, problems)


# ----------------------------------------------------------------- collage

class Collage:
    def __init__(self, category, projection, inc0, inc1, prof):
        self.category = category
        self.projection = projection
        self.inc0 = inc0
        self.inc1 = inc1
        self.prof = prof

    def __repr__(self):
        return f"<Collage of {self.prof.name}: {self.category!r}>"


def collage(m):
    """Category over [1] with fibers C, D and cross morphisms the elements."""
    c, d = m.source, m.target
    objs = [tag("0", x) for x in c.objects] + [tag("1", y) for y in d.objects]
    mors, comp = {}, {}
    for u, (s, t) in c.morphisms.items():
        mors[tag("0", u)] = (tag("0", s), tag("0", t))
    for v, (s, t) in d.morphisms.items():
        mors[tag("1", v)] = (tag("1", s), tag("1", t))
    for e, (x, y) in m.elements.items():
        mors[tag("m", e)] = (tag("0", x), tag("1", y))
    for (g, f), h in c.compose.items():
        comp[(tag("0", g), tag("0", f))] = tag("0", h)
    for (g, f), h in d.compose.items():
        comp[(tag("1", g), tag("1", f))] = tag("1", h)
    for (u, e), r in m.left.items():
        comp[(tag("m", e), tag("0", u))] = tag("m", r)
    for (e, v), r in m.right.items():
        comp[(tag("1", v), tag("m", e))] = tag("m", r)
    ident = {tag("0", x): tag("0", c.id(x)) for x in c.objects}
    ident.update({tag("1", y): tag("1", d.id(y)) for y in d.objects})
    cat = FinCategory(objs, mors, ident, comp, name=f"coll({m.name})")
    base = simplex_category(1)
    proj_m = {}
    for f, (s, t) in mors.items():
        a, b = split_tag(s)[0], split_tag(t)[0]
        proj_m[f] = base.id(a) if a == b else "0_1"
    proj = FinFunctor(cat, base, {o: split_tag(o)[0] for o in objs}, proj_m, name="coll_proj")
    inc0 = FinFunctor(c, cat, {x: tag("0", x) for x in c.objects},
                      {u: tag("0", u) for u in c.morphisms}, name="i0")
    inc1 = FinFunctor(d, cat, {y: tag("1", y) for y in d.objects},
                      {v: tag("1", v) for v in d.morphisms}, name="i1")
    return Collage(cat, proj, inc0, inc1, m)


def collage_factor(m, coll=None):
    """Witness compose(i0_!, i1^*) => M, [h, k] -> k.h (a cross morphism)."""
    coll = coll or collage(m)
    cat = coll.category
    src = compose_prof(companion(coll.inc0), conjoint(coll.inc1))
    mapping = {}
    for cls, (x, y) in src.rep_pair.items():
        _, h = split_tag(x)
        _, k = split_tag(y)
        kind, e = split_tag(cat.comp(k, h))
        assert kind == "m"
        mapping[cls] = e
    return ProfMorphism(src, m, mapping)


def elements_category(m):
    """Objects are elements; a morphism x -> x' is (u, v) with u.x' = x.v"""
    c, d = m.source, m.target
    objs = sorted(m.elements)
    mors, comp, ident = {}, {}, {}
    for x in objs:
        for x2 in objs:
            for u in c.hom(m.under(x), m.under(x2)):
                for v in d.hom(m.over(x), m.over(x2)):
                    if m.left[(u, x2)] == m.right[(x, v)]:
                        mors[tag(x, x2, u, v)] = (x, x2)
        ident[x] = tag(x, x, c.id(m.under(x)), d.id(m.over(x)))
    parts = {f: split_tag(f) for f in mors}
    for f, (a, b) in mors.items():
        _, _, u1, v1 = parts[f]
        for g, (b2, e) in mors.items():
            if b2 == b:
                _, _, u2, v2 = parts[g]
                comp[(g, f)] = tag(a, e, c.comp(u2, u1), d.comp(v2, v1))
    cat = FinCategory(objs, mors, ident, comp, name=f"el({m.name})")
    p1 = FinFunctor(cat, c, {x: m.under(x) for x in objs},
                    {f: parts[f][2] for f in mors}, name="p1")
    p2 = FinFunctor(cat, d, {x: m.over(x) for x in objs},
                    {f: parts[f][3] for f in mors}, name="p2")
    return cat, p1, p2


def projection_factor(m):
    """Witness compose(p1^*, p2_!) => M, [h, k] -> h.x.k"""
    _, p1, p2 = elements_category(m)
    src = compose_prof(conjoint(p1), companion(p2))
    mapping = {}
    for cls, (a, b) in src.rep_pair.items():
        x, h = split_tag(a)
        _, k = split_tag(b)
        mapping[cls] = m.right[(m.left[(h, x)], k)]
    return ProfMorphism(src, m, mapping)


# ---------------------------------------------------------------- cylinder

def cylinder_category(c):
    return product(c, simplex_category(1), name=f"{c.name}x[1]")


def cylinder_encode(a):
    """Profunctor C x [1] -/-> D with the target of a at end 0 and its source
    at end 1; the arrow 0 -> 1 acts by a."""
    m, n = a.source, a.target
    c, d = m.source, m.target
    cyl = cylinder_category(c)
    elements = {}
    for x, (p, q) in n.elements.items():
        elements[tag("0", x)] = (tag(p, "0"), q)
    for x, (p, q) in m.elements.items():
        elements[tag("1", x)] = (tag(p, "1"), q)

    def lact(w, e):
        u, s = split_tag(w)
        end, x = split_tag(e)
        src_end = split_tag(cyl.src(w))[1]
        if end == src_end:
            return tag(end, (m if end == "1" else n).left[(u, x)])
        return tag("0", n.left[(u, a.map[x])])

    def ract(e, v):
        end, x = split_tag(e)
        return tag(end, (m if end == "1" else n).right[(x, v)])

    return make_profunctor(cyl, d, elements, lact, ract, name="cyl")


def restrict_end(p, c, end):
    """Elements of a cylinder profunctor over one end, as a profunctor C -/-> D."""
    d = p.target
    keep, rename = {}, {}
    for e, (cx, y) in p.elements.items():
        x, k = split_tag(cx)
        if k != end:
            continue
        parts = split_tag(e) if e.startswith("(") else None
        new = parts[1] if parts and len(parts) == 2 and parts[0] == end else e
        if new in keep:
            raise ValueError("element names collide after stripping the end tag")
        keep[new] = (x, y)
        rename[e] = new
    back = {v: k for k, v in rename.items()}
    stay = simplex_category(1).id(end)
    left = {(u, rename[e]): rename[p.left[(tag(u, stay), e)]]
            for e in rename for u in c.morphisms if c.tgt(u) == keep[rename[e]][0]}
    right = {(rename[e], v): rename[p.right[(e, v)]]
             for e in rename for v in d.morphisms if d.src(v) == p.over(e)}
    out = Profunctor(c, d, keep, left, right, name=f"end{end}")
    out._origin = back
    return out


def cylinder_decode(p, c):
    """Inverse of cylinder_encode: the morphism from end 1 to end 0."""
    m = restrict_end(p, c, "1")
    n = restrict_end(p, c, "0")
    fwd = {v: k for k, v in n._origin.items()}
    mapping = {}
    for x, (obj, _) in m.elements.items():
        e = m._origin[x]
        moved = p.left[(tag(c.id(obj), "0_1"), e)]
        mapping[x] = fwd[moved]
    return ProfMorphism(m, n, mapping)


# ------------------------------------------------------------------ mates

def mate(f, g, m, n, a):
    """Transpose a: compose(M, g_!) => compose(f_!, N) to
    M => compose(compose(f_!, N), g^*)."""
    d2 = g.target
    fn = a.target
    tgt = compose_prof(fn, conjoint(g))
    src_sq = a.source
    mapping = {}
    for e, (_, y) in m.elements.items():
        unit = tag(y, d2.id(g.ob(y)))
        z = a.map[src_sq.pair_class[(e, unit)]]
        mapping[e] = tgt.pair_class[(z, unit)]
    return ProfMorphism(m, tgt, mapping)


def mate_inverse(f, g, m, n, b):
    """Transpose b: M => compose(compose(f_!, N), g^*) back to a square."""
    d2 = g.target
    fn = compose_prof(companion(f), n)
    src = compose_prof(m, companion(g))
    bt = b.target
    mapping = {}
    for cls, (e, y) in src.rep_pair.items():
        _, k = split_tag(y)
        z, w = bt.rep_pair[b.map[e]]
        _, h = split_tag(w)
        mapping[cls] = fn.right[(z, d2.comp(k, h))]
    return ProfMorphism(src, fn, mapping)


# ----------------------------------------------------------------- modules

def representable_module(c, x):
    """The module Hom(x, -) over C, as the companion of the point x."""
    pt = terminal()
    return companion(FinFunctor(pt, c, {"*": x}, {"id_*": c.id(x)}, name=f"pt_{x}"))


def module_apply(k, f):
    """Push a module F over C forward along K: C -/-> D."""
    if not (f.target is k.source or f.target == k.source):
        raise ValueError("module base does not match the profunctor source")
    return compose_prof(f, k)


def is_module(f):
    return len(f.source.objects) == 1 and len(f.source.morphisms) == 1


class MonadicityCheck:
    def __init__(self, holds, classes, counit):
        self.holds = holds
        self.classes = classes
        self.counit = counit

    def __repr__(self):
        return f"<MonadicityCheck holds={self.holds}>"


def monadicity_check(f, module):
    """Is a module F over D the coequalizer of LRLR F => LR F, where
    R = restriction along f and L = its left adjoint?"""
    lo, ro = companion(f), conjoint(f)
    rf = compose_prof(module, ro)
    lrf = compose_prof(rf, lo)
    eps = _module_counit(f, module, rf, lrf)
    rlrf = compose_prof(lrf, ro)
    lrlrf = compose_prof(rlrf, lo)
    eps_top = _module_counit(f, lrf, rlrf, lrlrf)
    r_eps = whisker_right(eps, ro, src=rlrf, tgt=rf)
    lr_eps = whisker_right(r_eps, lo, src=lrlrf, tgt=lrf)
    uf = _UnionFind(list(lrf.elements))
    for z in lrlrf.elements:
        uf.union(eps_top.map[z], lr_eps.map[z])
    classes = {}
    for e in lrf.elements:
        classes.setdefault(uf.find(e), []).append(e)
    images = {}
    well_defined = True
    for rep, members in classes.items():
        vals = {eps.map[e] for e in members}
        well_defined &= len(vals) == 1
        images[rep] = vals
    covered = set().union(*images.values()) if images else set()
    holds = (well_defined and covered == set(module.elements)
             and len(classes) == len(module.elements))
    return MonadicityCheck(holds, classes, eps)


def _module_counit(f, module, rf, lrf):
    """compose(compose(F, f^*), f_!) => F, [[x, k], h] -> x.(h.k)"""
    d = f.target
    mapping = {}
    for cls, (a, b) in lrf.rep_pair.items():
        x, kk = rf.rep_pair[a]
        _, k = split_tag(kk)
        _, h = split_tag(b)
        mapping[cls] = module.right[(x, d.comp(h, k))]
    return ProfMorphism(lrf, module, mapping)


# ------------------------------------------------------------------- spans

class Span:
    """Finite sets X <- A -> Y; apex elements map by left and right."""

    def __init__(self, xs, ys, left, right):
        self.xs = list(xs)
        self.ys = list(ys)
        self.left = dict(left)
        self.right = dict(right)
        if set(self.left) != set(self.right):
            raise ValueError("legs must share the apex")

    @property
    def apex(self):
        return list(self.left)

    def __repr__(self):
        return f"<Span {self.xs} <- {len(self.left)} -> {self.ys}>"


def prof_from_span(s):
    cx, cy = discrete(s.xs), discrete(s.ys)
    elements = {a: (s.left[a], s.right[a]) for a in s.left}
    return make_profunctor(cx, cy, elements, lambda u, e: e, lambda e, v: e, name="span")


def span_from_prof(m):
    for cat in (m.source, m.target):
        if any(not cat.is_identity(f) for f in cat.morphisms):
            raise ValueError("span_from_prof needs discrete categories")
    return Span(m.source.objects, m.target.objects,
                {e: xy[0] for e, xy in m.elements.items()},
                {e: xy[1] for e, xy in m.elements.items()})


def compose_spans(s, t):
    """Pullback over the shared middle set."""
    if list(s.ys) != list(t.xs):
        raise ValueError("middle sets differ")
    left, right = {}, {}
    for a in s.left:
        for b in t.left:
            if s.right[a] == t.left[b]:
                left[tag(a, b)] = s.left[a]
                right[tag(a, b)] = t.right[b]
    return Span(s.xs, t.ys, left, right)


def span_agreement(s, t):
    """Witness compose_prof of the span profunctors => profunctor of the pullback."""
    src = compose_prof(prof_from_span(s), prof_from_span(t))
    tgt = prof_from_span(compose_spans(s, t))
    return ProfMorphism(src, tgt, {cls: tag(a, b) for cls, (a, b) in src.rep_pair.items()})


# ------------------------------------------------------------- generators

def free_profunctor(c, d, generators):
    """Sum of representables Hom(-, c_k) x Hom(d_k, -), elements (k, u, v)."""
    elements = {}
    for k, (ck, dk) in enumerate(generators):
        for u in c.morphisms:
            if c.tgt(u) != ck:
                continue
            for v in d.morphisms:
                if d.src(v) == dk:
                    elements[tag(k, u, v)] = (c.src(u), d.tgt(v))

    def lact(w, e):
        k, u, v = split_tag(e)
        return tag(k, c.comp(u, w), v)

    def ract(e, w):
        k, u, v = split_tag(e)
        return tag(k, u, d.comp(w, v))

    return make_profunctor(c, d, elements, lact, ract, name="free")


def quotient_prof(m, pairs):
    """Smallest quotient identifying each given pair of elements."""
    uf = _UnionFind(list(m.elements))
    queue = deque()
    for a, b in pairs:
        if m.elements[a] != m.elements[b]:
            raise ValueError(f"{a} and {b} lie over different objects")
        queue.append((a, b))
    lefts, rights = {}, {}
    for (u, e), r in m.left.items():
        lefts.setdefault(e, []).append((u, r))
    for (e, v), r in m.right.items():
        rights.setdefault(e, []).append((v, r))
    while queue:
        a, b = queue.popleft()
        if not uf.union(a, b):
            continue
        la = dict(lefts[a])
        for u, r in lefts[b]:
            queue.append((la[u], r))
        ra = dict(rights[a])
        for v, r in rights[b]:
            queue.append((ra[v], r))
    reps = {e: uf.find(e) for e in m.elements}
    keep = {e: m.elements[e] for e in m.elements if reps[e] == e}
    left = {(u, e): reps[r] for (u, e), r in m.left.items() if e in keep}
    right = {(e, v): reps[r] for (e, v), r in m.right.items() if e in keep}
    return Profunctor(m.source, m.target, keep, left, right, name=f"{m.name}/~")


def random_profunctor(c, d, rng=None, max_elements=6, tries=20):
    """A random quotient of a sum of representables with few elements."""
    rng = rng or random.Random()
    if rng.random() < 0.08:
        return empty_profunctor(c, d)
    for _ in range(tries):
        gens = [(rng.choice(c.objects), rng.choice(d.objects))
                for _ in range(rng.randint(1, 3))]
        q = free_profunctor(c, d, gens)
        extra = rng.randint(0, 2)
        while len(q.elements) > max_elements or extra > 0:
            extra -= 1
            fibers = [v for v in _fiber_table(q).values() if len(v) > 1]
            if not fibers:
                break
            q = quotient_prof(q, [tuple(rng.sample(rng.choice(fibers), 2))])
        if len(q.elements) <= max_elements:
            return q
    return empty_profunctor(c, d)


# ------------------------------------------- transformations as 2-cells

def nat_to_conjoint_map(alpha):
    """alpha: f => g gives f^* => g^*, (c, k) -> (c, alpha_c.k)"""
    f, g = alpha.source, alpha.target
    d = f.target
    src, tgt = conjoint(f), conjoint(g)
    mapping = {}
    for e in src.elements:
        c, k = split_tag(e)
        mapping[e] = tag(c, d.comp(alpha[c], k))
    return ProfMorphism(src, tgt, mapping)


def conjoint_map_to_nat(f, g, b):
    """Read alpha_c off the image of (c, id_fc)."""
    from .fincat import NatTransf
    d = f.target
    comps = {c: split_tag(b.map[tag(c, d.id(f.ob(c)))])[1] for c in f.source.objects}
    return NatTransf(f, g, comps)


def nat_to_companion_map(alpha):
    """alpha: f => g gives g_! => f_!, (c, h) -> (c, h.alpha_c)"""
    f, g = alpha.source, alpha.target
    d = f.target
    src, tgt = companion(g), companion(f)
    mapping = {}
    for e in src.elements:
        c, h = split_tag(e)
        mapping[e] = tag(c, d.comp(h, alpha[c]))
    return ProfMorphism(src, tgt, mapping)


def companion_map_to_nat(f, g, b):
    """Read alpha_c off the image of (c, id_gc)."""
    from .fincat import NatTransf
    d = f.target
    comps = {c: split_tag(b.map[tag(c, d.id(g.ob(c)))])[1] for c in f.source.objects}
    return NatTransf(f, g, comps)


# ------------------------------------------------------ module enumeration

def module_from_functions(c, sizes, funs, name="F"):
    """Module over C from fiber sizes and a function (tuple) per morphism."""
    pt = terminal()
    elements = {tag(x, k): ("*", x) for x in c.objects for k in range(sizes[x])}
    left = {("id_*", e): e for e in elements}
    right = {}
    for v, (s, t) in c.morphisms.items():
        for k in range(sizes[s]):
            right[(tag(s, k), v)] = tag(t, funs[v][k])
    return Profunctor(pt, c, elements, left, right, name=name)


def module_functions(f):
    """Inverse of module_from_functions, for modules with canonical ids."""
    c = f.target
    sizes = {x: len(f.fiber("*", x)) for x in c.objects}
    funs = {}
    for v, (s, t) in c.morphisms.items():
        funs[v] = tuple(int(split_tag(f.right[(tag(s, k), v)])[1]) for k in range(sizes[s]))
    return sizes, funs


def _decompositions(c, gens):
    """Order the morphisms so each non-identity one is g.f0 with g a generator
    and f0 earlier."""
    known = {c.id(x): None for x in c.objects}
    order = list(known)
    frontier = list(order)
    while frontier:
        nxt = []
        for f0 in frontier:
            for g in gens:
                if c.src(g) != c.tgt(f0):
                    continue
                h = c.compose[(g, f0)]
                if h not in known:
                    known[h] = (g, f0)
                    order.append(h)
                    nxt.append(h)
        frontier = nxt
    if len(known) != len(c.morphisms):
        raise ValueError("generators do not generate")
    return order, known


def _refine_colors(c, gens, sizes, funs):
    """Stable colouring of module elements, invariant under isomorphism."""
    elems = [(x, k) for x in c.objects for k in range(sizes[x])]
    color = {e: (e[0],) for e in elems}
    out_edges = {e: [] for e in elems}
    in_edges = {e: [] for e in elems}
    for g in gens:
        s, t = c.morphisms[g]
        for k, v in enumerate(funs[g]):
            out_edges[(s, k)].append((g, (t, v)))
            in_edges[(t, v)].append((g, (s, k)))
    while True:
        sig = {e: (color[e],
                   tuple(color[y] for _, y in out_edges[e]),
                   tuple(sorted((g, color[y]) for g, y in in_edges[e])))
               for e in elems}
        names = {v: n for n, v in enumerate(sorted(set(sig.values())))}
        new = {e: names[sig[e]] for e in elems}
        if len(set(new.values())) == len(set(color.values())):
            palette = {n: v for v, n in names.items()}
            return new, tuple(sorted(palette[new[e]] for e in elems))
        color = {e: (names[sig[e]],) for e in elems}


def _funs_isomorphic(c, gens, sizes, a, ca, b, cb):
    elems = [(x, k) for x in c.objects for k in range(sizes[x])]
    fwd, used = {}, set()
    out_a = {e: [] for e in elems}
    for g in gens:
        s, t = c.morphisms[g]
        for k in range(sizes[s]):
            out_a[(s, k)].append((g, (t, a[g][k])))

    def consistent():
        for e, y in fwd.items():
            for g, z in out_a[e]:
                if z in fwd and fwd[z] != (z[0], b[g][y[1]]):
                    return False
        return True

    def rec(pos):
        if pos == len(elems):
            return True
        e = elems[pos]
        for k in range(sizes[e[0]]):
            y = (e[0], k)
            if y in used or cb[y] != ca[e]:
                continue
            fwd[e] = y
            used.add(y)
            if consistent() and rec(pos + 1):
                return True
            del fwd[e]
            used.discard(y)
        return False

    return rec(0)


def enumerate_modules(c, cap, up_to_iso=True, sizes=None, max_total=None):
    """Every module over C with all fibers of size <= cap.

    Modules are functors C -> finite sets; with up_to_iso one representative
    per isomorphism class is kept. Generator functions are chosen one at a
    time and each composition rule is checked as soon as it is determined.
    """
    gens = generating_set(c)
    order, decomp = _decompositions(c, gens)
    gpos = {g: k for k, g in enumerate(gens)}
    need = {}
    for f in order:
        if decomp[f] is None:
            need[f] = -1
        else:
            g, f0 = decomp[f]
            need[f] = max(gpos[g], need[f0])
    checks = [[] for _ in gens]
    for (g, f), h in c.compose.items():
        level = max(need[g], need[f], need[h])
        if level >= 0:
            checks[level].append((g, f, h))
    derived = [[] for _ in gens]
    for f in order:
        if need[f] >= 0:
            derived[need[f]].append(f)
    for k, g in enumerate(gens):
        checks[k].append((None, g, g))
    if sizes is not None:
        size_choices = [sizes]
    else:
        size_choices = [dict(zip(c.objects, s))
                        for s in itertools.product(range(cap + 1), repeat=len(c.objects))]
        if max_total is not None:
            size_choices = [sz for sz in size_choices if sum(sz.values()) <= max_total]
    found, buckets = [], {}

    def emit(sz, funs):
        if not up_to_iso:
            found.append(module_from_functions(c, sz, funs))
            return
        col, key = _refine_colors(c, gens, sz, funs)
        bucket = buckets.setdefault((tuple(sz[x] for x in c.objects), key), [])
        for other, ocol in bucket:
            if _funs_isomorphic(c, gens, sz, funs, col, other, ocol):
                return
        bucket.append((funs, col))
        found.append(module_from_functions(c, sz, funs))

    for sz in size_choices:
        funs = {c.id(x): tuple(range(sz[x])) for x in c.objects}
        gvals = {}

        def rec(k):
            if k == len(gens):
                emit(sz, dict(funs))
                return
            g = gens[k]
            for vals in itertools.product(range(sz[c.tgt(g)]), repeat=sz[c.src(g)]):
                gvals[g] = vals
                for f in derived[k]:
                    g2, f0 = decomp[f]
                    funs[f] = tuple(gvals[g2][v] for v in funs[f0])
                ok = True
                for a, b, h in checks[k]:
                    if a is None:
                        if funs[b] != gvals[b]:
                            ok = False
                            break
                    elif funs[h] != tuple(funs[a][v] for v in funs[b]):
                        ok = False
                        break
                if ok:
                    rec(k + 1)
            for f in derived[k]:
                funs.pop(f, None)

        rec(0)
    return found


def restrict_module(f, j):
    """F.j for a module F over the target of j, elements (c, x)."""
    c = j.source
    pt = f.source
    elements = {}
    for x in c.objects:
        for e in f.fiber("*", j.ob(x)):
            elements[tag(x, e)] = ("*", x)
    left = {("id_*", e): e for e in elements}
    right = {}
    for e in elements:
        x, y = split_tag(e)
        for u, (s, t) in c.morphisms.items():
            if s == x:
                right[(e, u)] = tag(t, f.right[(y, j.mor(u))])
    return Profunctor(pt, c, elements, left, right, name=f"{f.name}.{j.name}")
