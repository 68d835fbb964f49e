"""Lax diagrams [n] -> profunctors, their total categories, and lax cocones.

A lax diagram of length n has, for each 0 <= i <= n, an identity-on-objects
functor u_i: D_i -> E_i; for i < j a profunctor M_ij: E_i -/-> E_j; and for
i < j < k a cell compose(M_ij, M_jk) => M_ik. Encoding glues everything into
a total category E over [n] together with a functor h: D -> E.
"""

from __future__ import annotations

import itertools
import random

from .fincat import (
    FinCategory, FinFunctor, identity_functor, inverse, is_bijective_on_objects,
    opposite, product, simplex_category, split_tag, tag, validate_category,
    validate_functor,
)
from .prof import (
    ProfMorphism, Profunctor, _UnionFind, _search_maps, compose_prof, enumerate_modules,
    find_prof_iso, is_iso_morphism, prof_nats, random_profunctor, validate_prof,
    validate_prof_morphism,
)


class LaxDiagram:
    def __init__(self, vertices, edges, cells, name="L"):
        self.vertices = list(vertices)
        self.edges = dict(edges)
        self.cells = dict(cells)
        self.name = name

    @property
    def n(self):
        return len(self.vertices) - 1

    def fiber(self, i):
        return self.vertices[i].target

    def dfiber(self, i):
        return self.vertices[i].source

    def cell(self, i, j, k, x, y):
        c = self.cells[(i, j, k)]
        return c.map[c.source.pair_class[(x, y)]]

    def __repr__(self):
        sizes = {k: len(m) for k, m in self.edges.items()}
        return f"<LaxDiagram {self.name} of length {self.n}, edges {sizes}>"


def triples(n):
    return list(itertools.combinations(range(n + 1), 3))


def validate_lax(d):
    bad = []
    for i, u in enumerate(d.vertices):
        for b in validate_category(u.source) + validate_category(u.target) + validate_functor(u):
            bad.append(f"vertex {i}: {b}")
        if not is_bijective_on_objects(u):
            bad.append(f"vertex {i}: not bijective on objects")
    if bad:
        return bad
    for i, j in itertools.combinations(range(d.n + 1), 2):
        m = d.edges.get((i, j))
        if m is None:
            bad.append(f"edge {i}{j} missing")
            continue
        if m.source != d.fiber(i) or m.target != d.fiber(j):
            bad.append(f"edge {i}{j} has the wrong ends")
            continue
        bad += [f"edge {i}{j}: {b}" for b in validate_prof(m)]
    if bad:
        return bad
    for i, j, k in triples(d.n):
        c = d.cells.get((i, j, k))
        if c is None:
            bad.append(f"cell {i}{j}{k} missing")
            continue
        if c.source != compose_prof(d.edges[(i, j)], d.edges[(j, k)]) or c.target != d.edges[(i, k)]:
            bad.append(f"cell {i}{j}{k} has the wrong boundary")
            continue
        bad += [f"cell {i}{j}{k}: {b}" for b in validate_prof_morphism(c)]
    if bad:
        return bad
    for i, j, k, l in itertools.combinations(range(d.n + 1), 4):
        mij, mjk, mkl = d.edges[(i, j)], d.edges[(j, k)], d.edges[(k, l)]
        for x, (_, b) in mij.elements.items():
            for y in [y for y, (a, _) in mjk.elements.items() if a == b]:
                for z in [z for z, (a, _) in mkl.elements.items() if a == mjk.over(y)]:
                    lhs = d.cell(i, k, l, d.cell(i, j, k, x, y), z)
                    rhs = d.cell(i, j, l, x, d.cell(j, k, l, y, z))
                    if lhs != rhs:
                        bad.append(f"associativity fails on {i}{j}{k}{l} at ({x},{y},{z})")
    return bad


# ------------------------------------------------------------- wrr objects

class WrrObject:
    """h: D -> E over [n], with p: E -> [n]."""

    def __init__(self, h, p):
        self.h = h
        self.p = p

    @property
    def n(self):
        return len(self.p.target.objects) - 1

    def __repr__(self):
        return f"<WrrObject over [{self.n}]: {self.h.source!r} -> {self.h.target!r}>"


def validate_wrr(w):
    h, p = w.h, w.p
    bad = validate_functor(h) + validate_functor(p)
    if bad:
        return bad
    if h.target != p.source:
        return ["h and p do not share E"]
    base = simplex_category(w.n)
    if p.target != base:
        return ["p does not land in [n]"]
    d, e = h.source, h.target
    for i in range(w.n + 1):
        ds = [x for x in d.objects if p.ob(h.ob(x)) == str(i)]
        es = [y for y in e.objects if p.ob(y) == str(i)]
        if sorted(h.ob(x) for x in ds) != sorted(es):
            bad.append(f"h is not bijective on the objects of fiber {i}")
    for a in base.nonidentity():
        dm = [f for f in d.morphisms if p.mor(h.mor(f)) == a]
        em = [f for f in e.morphisms if p.mor(f) == a]
        if sorted(h.mor(f) for f in dm) != sorted(em):
            bad.append(f"h is not bijective on morphisms over {a}")
    return bad


def encode_lax(d):
    """The total category of a lax diagram, with D glued from the D_i."""
    n = d.n
    base = simplex_category(n)
    e_obs, e_mors, e_id, e_comp = [], {}, {}, {}
    d_obs, d_mors, d_id, d_comp = [], {}, {}, {}
    h_ob, h_mor, p_ob, p_mor = {}, {}, {}, {}
    for i, u in enumerate(d.vertices):
        ei, di = u.target, u.source
        for y in ei.objects:
            e_obs.append(tag(i, y))
            e_id[tag(i, y)] = tag(i, ei.id(y))
            p_ob[tag(i, y)] = str(i)
        for f, (s, t) in ei.morphisms.items():
            e_mors[tag(i, f)] = (tag(i, s), tag(i, t))
            p_mor[tag(i, f)] = base.id(str(i))
        for (g, f), r in ei.compose.items():
            e_comp[(tag(i, g), tag(i, f))] = tag(i, r)
        for x in di.objects:
            d_obs.append(tag(i, x))
            d_id[tag(i, x)] = tag(i, di.id(x))
            h_ob[tag(i, x)] = tag(i, u.ob(x))
        for f, (s, t) in di.morphisms.items():
            d_mors[tag(i, f)] = (tag(i, s), tag(i, t))
            h_mor[tag(i, f)] = tag(i, u.mor(f))
        for (g, f), r in di.compose.items():
            d_comp[(tag(i, g), tag(i, f))] = tag(i, r)
    back = [{u.ob(x): x for x in u.source.objects} for u in d.vertices]
    for (i, j), m in d.edges.items():
        ui, uj = d.vertices[i], d.vertices[j]
        for e, (x, y) in m.elements.items():
            c = tag(i, j, e)
            e_mors[c] = (tag(i, x), tag(j, y))
            d_mors[c] = (tag(i, back[i][x]), tag(j, back[j][y]))
            h_mor[c] = c
            p_mor[c] = f"{i}_{j}"
        for (f, e), r in m.left.items():
            e_comp[(tag(i, j, e), tag(i, f))] = tag(i, j, r)
        for (e, g), r in m.right.items():
            e_comp[(tag(j, g), tag(i, j, e))] = tag(i, j, r)
        for u, (_, t) in ui.source.morphisms.items():
            for e in m.elements:
                if m.under(e) == ui.ob(t):
                    d_comp[(tag(i, j, e), tag(i, u))] = tag(i, j, m.left[(ui.mor(u), e)])
        for v, (s, _) in uj.source.morphisms.items():
            for e in m.elements:
                if m.over(e) == uj.ob(s):
                    d_comp[(tag(j, v), tag(i, j, e))] = tag(i, j, m.right[(e, uj.mor(v))])
    for i, j, k in triples(n):
        cell = d.cells[(i, j, k)]
        for (x, y), cls in cell.source.pair_class.items():
            r = tag(i, k, cell.map[cls])
            e_comp[(tag(j, k, y), tag(i, j, x))] = r
            d_comp[(tag(j, k, y), tag(i, j, x))] = r
    e = FinCategory(e_obs, e_mors, e_id, e_comp, name=f"tot({d.name})")
    dd = FinCategory(d_obs, d_mors, d_id, d_comp, name=f"totD({d.name})")
    h = FinFunctor(dd, e, h_ob, h_mor, name="h")
    p = FinFunctor(e, base, p_ob, p_mor, name="p")
    return WrrObject(h, p)


def fiber_category(c, p, i):
    """The fiber of p: C -> [n] over i, keeping C's ids."""
    obs = [x for x in c.objects if p.ob(x) == str(i)]
    idm = p.target.id(str(i))
    mors = {f: st for f, st in c.morphisms.items() if p.mor(f) == idm}
    comp = {k: v for k, v in c.compose.items() if k[0] in mors and k[1] in mors}
    return FinCategory(obs, mors, {x: c.id(x) for x in obs}, comp, name=f"{c.name}_{i}")


def decode_lax(w):
    """Read a lax diagram off a wrr object: fibers, cross morphisms, composition."""
    bad = validate_wrr(w)
    if bad:
        raise ValueError("invalid wrr object: " + "; ".join(bad))
    h, p = w.h, w.p
    e, dd = h.target, h.source
    ph = FinFunctor(dd, p.target, {x: p.ob(h.ob(x)) for x in dd.objects},
                    {f: p.mor(h.mor(f)) for f in dd.morphisms})
    verts, fibers = [], []
    for i in range(w.n + 1):
        ei = fiber_category(e, p, i)
        di = fiber_category(dd, ph, i)
        verts.append(FinFunctor(di, ei, {x: h.ob(x) for x in di.objects},
                                {f: h.mor(f) for f in di.morphisms}, name=f"u{i}"))
        fibers.append(ei)
    edges = {}
    for i, j in itertools.combinations(range(w.n + 1), 2):
        a = f"{i}_{j}"
        ei, ej = fibers[i], fibers[j]
        elements = {f: st for f, st in e.morphisms.items() if p.mor(f) == a}
        left, right = {}, {}
        for f, (x, y) in elements.items():
            for u, (_, t) in ei.morphisms.items():
                if t == x:
                    left[(u, f)] = e.comp(f, u)
            for v, (s, _) in ej.morphisms.items():
                if s == y:
                    right[(f, v)] = e.comp(v, f)
        edges[(i, j)] = Profunctor(ei, ej, elements, left, right, name=f"M{i}{j}")
    cells = {}
    for i, j, k in triples(w.n):
        src = compose_prof(edges[(i, j)], edges[(j, k)])
        cells[(i, j, k)] = ProfMorphism(src, edges[(i, k)],
                                        {cls: e.comp(y, x) for cls, (x, y) in src.rep_pair.items()})
    return LaxDiagram(verts, edges, cells, name=f"dec({e.name})")


# ------------------------------------------------------------ isomorphisms

def is_isomorphism(f):
    return (not validate_functor(f)
            and len(set(f.obmap.values())) == len(f.target.objects) == len(f.source.objects)
            and len(set(f.mormap.values())) == len(f.target.morphisms) == len(f.source.morphisms))


def check_lax_iso(d1, d2, dmaps, emaps, mmaps):
    """Check a proposed isomorphism of lax diagrams.

    dmaps[i]: D_i -> D'_i and emaps[i]: E_i -> E'_i are functors; mmaps[(i, j)]
    sends elements of M_ij to elements of M'_ij.
    """
    bad = []
    if d1.n != d2.n:
        return ["lengths differ"]
    for i in range(d1.n + 1):
        fd, fe = dmaps[i], emaps[i]
        if not is_isomorphism(fd) or not is_isomorphism(fe):
            bad.append(f"vertex {i}: component is not an isomorphism")
            continue
        u1, u2 = d1.vertices[i], d2.vertices[i]
        for f in u1.source.morphisms:
            if fe.mor(u1.mor(f)) != u2.mor(fd.mor(f)):
                bad.append(f"vertex {i}: square fails at {f}")
    if bad:
        return bad
    for (i, j), m1 in d1.edges.items():
        m2, phi = d2.edges[(i, j)], mmaps[(i, j)]
        if sorted(phi[x] for x in m1.elements) != sorted(m2.elements):
            bad.append(f"edge {i}{j}: not a bijection")
            continue
        fi, fj = emaps[i], emaps[j]
        for x, (a, b) in m1.elements.items():
            if m2.elements[phi[x]] != (fi.ob(a), fj.ob(b)):
                bad.append(f"edge {i}{j}: {x} over the wrong objects")
        for (u, x), r in m1.left.items():
            if phi[r] != m2.left[(fi.mor(u), phi[x])]:
                bad.append(f"edge {i}{j}: left action at ({u},{x})")
        for (x, v), r in m1.right.items():
            if phi[r] != m2.right[(phi[x], fj.mor(v))]:
                bad.append(f"edge {i}{j}: right action at ({x},{v})")
    if bad:
        return bad
    for i, j, k in triples(d1.n):
        src = d1.cells[(i, j, k)].source
        for (x, y) in src.pair_class:
            lhs = mmaps[(i, k)][d1.cell(i, j, k, x, y)]
            rhs = d2.cell(i, j, k, mmaps[(i, j)][x], mmaps[(j, k)][y])
            if lhs != rhs:
                bad.append(f"cell {i}{j}{k} not preserved at ({x},{y})")
    return bad


def diagram_roundtrip(d):
    """decode(encode(d)) is isomorphic to d via x -> (i, x); returns problems."""
    d2 = decode_lax(encode_lax(d))
    dmaps, emaps = [], []
    for i, u in enumerate(d.vertices):
        dmaps.append(FinFunctor(u.source, d2.dfiber(i), {x: tag(i, x) for x in u.source.objects},
                                {f: tag(i, f) for f in u.source.morphisms}))
        emaps.append(FinFunctor(u.target, d2.fiber(i), {x: tag(i, x) for x in u.target.objects},
                                {f: tag(i, f) for f in u.target.morphisms}))
    mmaps = {(i, j): {x: tag(i, j, x) for x in m.elements} for (i, j), m in d.edges.items()}
    return check_lax_iso(d, d2, dmaps, emaps, mmaps)


def wrr_roundtrip(w):
    """encode(decode(w)) is isomorphic to w over [n]; returns problems."""
    w2 = encode_lax(decode_lax(w))
    h, p = w.h, w.p
    e2, dd2 = w2.h.target, w2.h.source
    dd = h.source
    cross = {h.mor(f): f for f in dd.morphisms if p.mor(h.mor(f)) not in p.target.identity.values()}

    def e_mor(f):
        parts = split_tag(f)
        return parts[-1]

    fe = FinFunctor(e2, h.target, {x: split_tag(x)[1] for x in e2.objects},
                    {f: e_mor(f) for f in e2.morphisms}, name="w_E")
    fd_m = {}
    for f in dd2.morphisms:
        parts = split_tag(f)
        fd_m[f] = parts[1] if len(parts) == 2 else cross[parts[2]]
    fd = FinFunctor(dd2, dd, {x: split_tag(x)[1] for x in dd2.objects}, fd_m, name="w_D")
    bad = []
    if not is_isomorphism(fe):
        bad.append("total categories are not isomorphic via the witness")
    if not is_isomorphism(fd):
        bad.append("glued categories are not isomorphic via the witness")
    if bad:
        return bad
    for f in dd2.morphisms:
        if fe.mor(w2.h.mor(f)) != h.mor(fd.mor(f)):
            bad.append(f"witness does not commute with h at {f}")
    for f in e2.morphisms:
        if p.mor(fe.mor(f)) != w2.p.mor(f):
            bad.append(f"witness does not lie over [n] at {f}")
    return bad


def unital_wrr(p):
    """The wrr object (id, p) of a category over [n]."""
    return WrrObject(identity_functor(p.source), p)


def unital_roundtrip(p):
    """Decode (id, p) to a unital diagram and check encoding recovers p."""
    w = unital_wrr(p)
    d = decode_lax(w)
    bad = [f"vertex {i} is not unital" for i, u in enumerate(d.vertices)
           if u.source != u.target]
    return d, bad + wrr_roundtrip(w)


# ------------------------------------------------------------- lax cocones

class LaxCocone:
    """Modules F_i over E_i with actions compose(F_i, M_ij) => F_j."""

    def __init__(self, diagram, modules, actions):
        self.diagram = diagram
        self.modules = list(modules)
        self.actions = dict(actions)

    def act(self, i, j, g, e):
        a = self.actions[(i, j)]
        return a.map[a.source.pair_class[(g, e)]]

    def __repr__(self):
        return f"<LaxCocone sizes {[len(f) for f in self.modules]}>"


def _starting(m, x):
    return [e for e, (a, _) in m.elements.items() if a == x]


def _cocycle_ok(c, i, j, k):
    d = c.diagram
    mij, mjk = d.edges[(i, j)], d.edges[(j, k)]
    for g, (_, x) in c.modules[i].elements.items():
        for e in _starting(mij, x):
            for e2 in _starting(mjk, mij.over(e)):
                if c.act(i, k, g, d.cell(i, j, k, e, e2)) != c.act(j, k, c.act(i, j, g, e), e2):
                    return False
    return True


def validate_cocone(c):
    d = c.diagram
    bad = []
    for i, f in enumerate(c.modules):
        if f.target != d.fiber(i):
            bad.append(f"module {i} lives over the wrong category")
        else:
            bad += [f"module {i}: {b}" for b in validate_prof(f)]
    if bad:
        return bad
    for (i, j), a in c.actions.items():
        if a.source != compose_prof(c.modules[i], d.edges[(i, j)]) or a.target != c.modules[j]:
            bad.append(f"action {i}{j} has the wrong boundary")
        else:
            bad += [f"action {i}{j}: {b}" for b in validate_prof_morphism(a)]
    if bad:
        return bad
    for i, j, k in triples(d.n):
        if not _cocycle_ok(c, i, j, k):
            bad.append(f"cocycle condition fails on {i}{j}{k}")
    return bad


def is_cocone_morphism(c1, c2, comps, check=True):
    """comps[i]: F_i => F'_i commuting with the edge actions."""
    if check and any(validate_prof_morphism(a) for a in comps):
        return False
    d = c1.diagram
    for (i, j), m in d.edges.items():
        for g, (_, x) in c1.modules[i].elements.items():
            for e in _starting(m, x):
                if comps[j].map[c1.act(i, j, g, e)] != c2.act(i, j, comps[i].map[g], e):
                    return False
    return True


def cocone_morphisms(c1, c2):
    choices = [prof_nats(f, g) for f, g in zip(c1.modules, c2.modules)]
    return [list(t) for t in itertools.product(*choices)
            if is_cocone_morphism(c1, c2, t, check=False)]


def _isos(f, g):
    return _search_maps(f, g, bijective=True)


def cocone_isomorphism(c1, c2):
    """An isomorphism of lax cocones, or None."""
    if [len(f) for f in c1.modules] != [len(f) for f in c2.modules]:
        return None
    choices = []
    for f, g in zip(c1.modules, c2.modules):
        isos = _isos(f, g)
        if not isos:
            return None
        choices.append(isos)
    for t in itertools.product(*choices):
        if is_cocone_morphism(c1, c2, t, check=False):
            return list(t)
    return None


def _edge_actions(d, modules):
    """All families of edge actions on fixed modules satisfying the cocycles.

    Edges are assigned in order and each cocycle is tested as soon as its
    three actions are known.
    """
    keys = sorted(d.edges)
    sources = {k: compose_prof(modules[k[0]], d.edges[k]) for k in keys}
    options = [prof_nats(sources[k], modules[k[1]]) for k in keys]
    pos = {k: n for n, k in enumerate(keys)}
    checks = [[] for _ in keys]
    for i, j, k in triples(d.n):
        mij, mjk = d.edges[(i, j)], d.edges[(j, k)]
        entries = []
        for g, (_, x) in modules[i].elements.items():
            for e in _starting(mij, x):
                for e2 in _starting(mjk, mij.over(e)):
                    entries.append((sources[(i, k)].pair_class[(g, d.cell(i, j, k, e, e2))],
                                    sources[(i, j)].pair_class[(g, e)], e2))
        last = max(pos[(i, j)], pos[(j, k)], pos[(i, k)])
        checks[last].append(((i, j), (j, k), (i, k), sources[(j, k)].pair_class, entries))
    chosen = {}

    def rec(n):
        if n == len(keys):
            yield LaxCocone(d, modules, dict(chosen))
            return
        for a in options[n]:
            chosen[keys[n]] = a
            ok = True
            for ij, jk, ik, pc, entries in checks[n]:
                aij, ajk, aik = chosen[ij].map, chosen[jk].map, chosen[ik].map
                if any(aik[c1] != ajk[pc[(aij[c2], e2)]] for c1, c2, e2 in entries):
                    ok = False
                    break
            if ok:
                yield from rec(n + 1)
        chosen.pop(keys[n], None)

    yield from rec(0)


def _action_key(c, keys):
    out = []
    for i, j in keys:
        a = c.actions[(i, j)]
        out.append(tuple(a.map[a.source.pair_class[p]] for p in sorted(a.source.pair_class)))
    return tuple(out)


def _transported_key(c, keys, sigma):
    """Key of the cocone obtained by relabelling each F_i along sigma[i]."""
    out = []
    for i, j in keys:
        a = c.actions[(i, j)]
        inv = {v: k for k, v in sigma[i].items()}
        out.append(tuple(sigma[j][a.map[a.source.pair_class[(inv[g], e)]]]
                         for g, e in sorted(a.source.pair_class)))
    return tuple(out)


def lax_cocones(d, cap):
    """Lax cocones with module fibers <= cap, one per isomorphism class.

    For a fixed tuple of module representatives, two families of edge actions
    give isomorphic cocones exactly when they lie in one orbit of the product
    of the automorphism groups; each orbit is recorded once.
    """
    reps = [enumerate_modules(d.fiber(i), cap) for i in range(d.n + 1)]
    keys = sorted(d.edges)
    out = []
    for modules in itertools.product(*reps):
        modules = list(modules)
        auts = [[a.map for a in _search_maps(f, f, bijective=True)] for f in modules]
        seen = set()
        for c in _edge_actions(d, modules):
            key = _action_key(c, keys)
            if key in seen:
                continue
            out.append(c)
            for sigma in itertools.product(*auts):
                seen.add(_transported_key(c, keys, sigma))
    return out


def cocone_invariant(c):
    """Fiber sizes and image sizes of every action, read off the cocone."""
    d = c.diagram
    inv = []
    for i, f in enumerate(c.modules):
        ei = d.fiber(i)
        for x in ei.objects:
            inv.append(len(f.fiber("*", x)))
        for v, (s, _) in ei.morphisms.items():
            inv.append(len({f.right[(g, v)] for g in f.fiber("*", s)}))
    for (i, j), m in sorted(d.edges.items()):
        for e, (x, _) in m.elements.items():
            inv.append(len({c.act(i, j, g, e) for g in c.modules[i].fiber("*", x)}))
    return tuple(inv)


def module_invariant(d, g):
    """The same numbers read off a module over the total category."""
    inv = []
    for i in range(d.n + 1):
        ei = d.fiber(i)
        for x in ei.objects:
            inv.append(len(g.fiber("*", tag(i, x))))
        for v, (s, _) in ei.morphisms.items():
            inv.append(len({g.right[(x, tag(i, v))] for x in g.fiber("*", tag(i, s))}))
    for (i, j), m in sorted(d.edges.items()):
        for e, (x, _) in m.elements.items():
            inv.append(len({g.right[(y, tag(i, j, e))] for y in g.fiber("*", tag(i, x))}))
    return tuple(inv)


def modules_over_total(d, cap, w=None):
    w = w or encode_lax(d)
    return enumerate_modules(w.h.target, cap)


def cocone_to_module(c, w=None):
    """The module over the total category assembled from a cocone."""
    d = c.diagram
    w = w or encode_lax(d)
    e = w.h.target
    pt = c.modules[0].source
    elements, right = {}, {}
    for i, f in enumerate(c.modules):
        for g, (_, x) in f.elements.items():
            elements[tag(i, g)] = ("*", tag(i, x))
        for (g, v), r in f.right.items():
            right[(tag(i, g), tag(i, v))] = tag(i, r)
    for (i, j), m in d.edges.items():
        for g, (_, x) in c.modules[i].elements.items():
            for el in _starting(m, x):
                right[(tag(i, g), tag(i, j, el))] = tag(j, c.act(i, j, g, el))
    left = {("id_*", g): g for g in elements}
    return Profunctor(pt, e, elements, left, right, name="tot(F)")


def module_to_cocone(d, g, w=None):
    """Restrict a module over the total category to its fibers and cross actions."""
    w = w or encode_lax(d)
    pt = g.source
    modules = []
    for i in range(d.n + 1):
        ei = d.fiber(i)
        elements = {x: ("*", split_tag(o)[1]) for x, (_, o) in g.elements.items()
                    if split_tag(o)[0] == str(i)}
        right = {(x, v): g.right[(x, tag(i, v))] for x, (_, y) in elements.items()
                 for v, (s, _) in ei.morphisms.items() if s == y}
        modules.append(Profunctor(pt, ei, elements, {("id_*", x): x for x in elements}, right,
                                  name=f"G{i}"))
    actions = {}
    for (i, j), m in d.edges.items():
        src = compose_prof(modules[i], m)
        actions[(i, j)] = ProfMorphism(src, modules[j], {
            cls: g.right[(x, tag(i, j, el))] for cls, (x, el) in src.rep_pair.items()})
    return LaxCocone(d, modules, actions)


def module_roundtrip_witness(d, g, w=None):
    """cocone_to_module(module_to_cocone(G)) => G, (i, x) -> x."""
    g2 = cocone_to_module(module_to_cocone(d, g, w), w)
    return ProfMorphism(g2, g, {x: split_tag(x)[1] for x in g2.elements})


def cocone_roundtrip_witness(c, w=None):
    """module_to_cocone(cocone_to_module(c)) => c, componentwise (i, x) -> x."""
    c2 = module_to_cocone(c.diagram, cocone_to_module(c, w), w)
    comps = [ProfMorphism(f2, f, {x: split_tag(x)[1] for x in f2.elements})
             for f2, f in zip(c2.modules, c.modules)]
    return c2, comps


class ColimitReport:
    def __init__(self, cocones, modules, problems, hom_pairs):
        self.cocones = cocones
        self.modules = modules
        self.problems = problems
        self.hom_pairs = hom_pairs

    @property
    def ok(self):
        return not self.problems

    def __repr__(self):
        return (f"<ColimitReport {len(self.cocones)} cocones, {len(self.modules)} modules, "
                f"{len(self.problems)} problems>")


def colimit_check(d, cap, hom_sample=None, seed=0):
    """Lax cocones with fibers <= cap against modules over the total category.

    Both sides are enumerated independently. The comparison functors are
    cocone_to_module and module_to_cocone; their composites are checked
    isomorphic to identities by explicit witnesses, they are checked to
    induce a bijection on isomorphism classes, and cocone_to_module is checked
    bijective on morphisms for every (or a sampled set of) pairs of classes.
    """
    problems = list(validate_lax(d))
    if problems:
        return ColimitReport([], [], problems, 0)
    w = encode_lax(d)
    cocones = lax_cocones(d, cap)
    modules = modules_over_total(d, cap, w)
    mod_buckets, coc_buckets = {}, {}
    for k, g in enumerate(modules):
        mod_buckets.setdefault(module_invariant(d, g), []).append(k)
    for k, c in enumerate(cocones):
        coc_buckets.setdefault(cocone_invariant(c), []).append(k)
    images = []
    for c in cocones:
        problems += [f"cocone: {b}" for b in validate_cocone(c)]
        g = cocone_to_module(c, w)
        bad = validate_prof(g)
        if bad:
            problems.append(f"assembled module invalid: {bad[0]}")
            images.append(None)
            continue
        c2, comps = cocone_roundtrip_witness(c, w)
        if not (all(is_iso_morphism(a) for a in comps) and is_cocone_morphism(c2, c, comps)):
            problems.append("cocone roundtrip witness is not an isomorphism")
        hits = [k for k in mod_buckets.get(module_invariant(d, g), [])
                if find_prof_iso(g, modules[k]) is not None]
        if len(hits) != 1:
            problems.append(f"cocone matches {len(hits)} module classes")
        images.append(hits[0] if len(hits) == 1 else None)
    preimages = []
    for g in modules:
        c = module_to_cocone(d, g, w)
        bad = validate_cocone(c)
        if bad:
            problems.append(f"restricted cocone invalid: {bad[0]}")
            preimages.append(None)
            continue
        if not is_iso_morphism(module_roundtrip_witness(d, g, w)):
            problems.append("module roundtrip witness is not an isomorphism")
        hits = [k for k in coc_buckets.get(cocone_invariant(c), [])
                if cocone_isomorphism(c, cocones[k]) is not None]
        if len(hits) != 1:
            problems.append(f"module matches {len(hits)} cocone classes")
        preimages.append(hits[0] if len(hits) == 1 else None)
    if len(cocones) != len(modules):
        problems.append(f"{len(cocones)} cocone classes but {len(modules)} module classes")
    for k, m in enumerate(images):
        if m is not None and preimages[m] != k:
            problems.append("class maps are not mutually inverse")
    pairs = list(itertools.product(range(len(cocones)), repeat=2))
    if hom_sample is not None and len(pairs) > hom_sample:
        pairs = random.Random(seed).sample(pairs, hom_sample)
    for a, b in pairs:
        c1, c2 = cocones[a], cocones[b]
        g1, g2 = cocone_to_module(c1, w), cocone_to_module(c2, w)
        mors = cocone_morphisms(c1, c2)
        pushed = set()
        for comps in mors:
            mp = {tag(i, x): tag(i, comps[i].map[x])
                  for i, f in enumerate(c1.modules) for x in f.elements}
            pushed.add(tuple(sorted(mp.items())))
        nats = {tuple(sorted(a.map.items())) for a in prof_nats(g1, g2)}
        if len(pushed) != len(mors) or pushed != nats:
            problems.append(f"hom sets differ between cocones {a} and {b}")
    return ColimitReport(cocones, modules, problems, len(pairs))


# ---------------------------------------------------------- fiber collapse

class CollapseResult:
    def __init__(self, category, projection, quotient, status, length):
        self.category = category
        self.projection = projection
        self.quotient = quotient
        self.status = status
        self.length = length

    def __repr__(self):
        return f"<CollapseResult {self.status} at length {self.length}: {self.category!r}>"


class Unsaturated(Exception):
    def __init__(self, bound):
        super().__init__(f"string quotient not saturated within bound {bound}")
        self.bound = bound


def collapse_fibers(w, bound=8):
    """Contract the images of the D-fiber morphisms in E.

    Every image must be invertible. The images generate a subgroupoid K of E;
    a string of E-morphisms whose ends meet up to K reduces to one morphism by
    splicing in a K-path, so reduced strings have length <= 1. Certifying this
    means checking lengths 2 and 3, hence bound >= 3. The morphisms of the
    quotient are classes of E-morphisms under the congruence generated by
    k ~ id for k in K, computed by closure.
    """
    h, p = w.h, w.p
    e, dd = h.target, h.source
    idb = set(p.target.identity.values())
    images = [h.mor(f) for f in dd.morphisms if p.mor(h.mor(f)) in idb]
    for f in images:
        if inverse(e, f) is None:
            raise ValueError(f"image {f} of a fiber morphism is not invertible")
    if bound < 3:
        raise Unsaturated(bound)
    gens = set(images) | {inverse(e, f) for f in images}
    # K-components with a chosen path from the root to every object
    path = {}
    root = {}
    for x in e.objects:
        if x in path:
            continue
        path[x], root[x] = e.id(x), x
        queue = [x]
        while queue:
            y = queue.pop()
            for k in gens:
                s, t = e.morphisms[k]
                if s == y and t not in path:
                    path[t], root[t] = e.comp(k, path[y]), x
                    queue.append(t)
    roots = [x for x in e.objects if root[x] == x]

    def norm(f):
        s, t = e.morphisms[f]
        return e.comp(inverse(e, path[t]), f, path[s])

    rmors = [f for f in e.morphisms if root[e.src(f)] == e.src(f) and root[e.tgt(f)] == e.tgt(f)]
    uf = _UnionFind(rmors)
    for k in gens:
        nk = norm(k)
        uf.union(nk, e.id(e.src(nk)))
    changed = True
    while changed:
        changed = False
        for f in rmors:
            r = uf.find(f)
            if r == f:
                continue
            for g in rmors:
                if e.src(g) == e.tgt(f) and uf.union(e.comp(g, f), e.comp(g, r)):
                    changed = True
                if e.tgt(g) == e.src(f) and uf.union(e.comp(f, g), e.comp(r, g)):
                    changed = True
    reps = sorted({uf.find(f) for f in rmors})
    mors = {f: e.morphisms[f] for f in reps}
    ident = {x: uf.find(e.id(x)) for x in roots}
    comp = {(g, f): uf.find(e.comp(g, f)) for g in reps for f in reps if e.src(g) == e.tgt(f)}
    q = FinCategory(roots, mors, ident, comp, name=f"collapse({e.name})")
    bad = validate_category(q)
    if bad:
        raise ValueError("quotient is not a category: " + bad[0])
    quot = FinFunctor(e, q, {x: root[x] for x in e.objects},
                      {f: uf.find(norm(f)) for f in e.morphisms}, name="collapse")
    bad = validate_functor(quot)
    if bad:
        raise ValueError("quotient map is not a functor: " + bad[0])
    proj = FinFunctor(q, p.target, {x: p.ob(x) for x in roots},
                      {f: p.mor(f) for f in reps}, name="p")
    return CollapseResult(q, proj, quot, "Saturated", 1)


# -------------------------------------------------------------- generators

def vertex_catalogue():
    """Identity-on-objects functors with at most 2 objects and 5 morphisms in E."""
    from .fincat import cyclic_group, discrete, terminal, walking_iso
    out = []
    for c in (terminal(), simplex_category(1), discrete(["0", "1"]), cyclic_group(2),
              walking_iso(), cyclic_group(3)):
        out.append(identity_functor(c))
    one = simplex_category(1)
    dis = discrete(["0", "1"])
    out.append(FinFunctor(dis, one, {"0": "0", "1": "1"}, {"id_0": "id_0", "id_1": "id_1"},
                          name="disc->[1]"))
    t, z2 = terminal(), cyclic_group(2)
    out.append(FinFunctor(t, z2, {"*": "*"}, {"id_*": "e"}, name="*->Z/2"))
    iso = walking_iso()
    out.append(FinFunctor(dis, iso, {"0": "x", "1": "y"}, {"id_0": "id_x", "id_1": "id_y"},
                          name="disc->I"))
    return out


def bimodule_to_prof(f, c, d):
    """A module over C^op x D read as a profunctor C -/-> D."""
    elements = {}
    for x, (_, o) in f.elements.items():
        a, b = split_tag(o)
        elements[x] = (a, b)
    left, right = {}, {}
    for x, (a, b) in elements.items():
        for u, (s, t) in c.morphisms.items():
            if t == a:
                left[(u, x)] = f.right[(x, tag(u, d.id(b)))]
        for v, (s, t) in d.morphisms.items():
            if s == b:
                right[(x, v)] = f.right[(x, tag(c.id(a), v))]
    return Profunctor(c, d, elements, left, right, name="M")


def edge_profunctors(c, d, max_elements):
    """Every profunctor C -/-> D with at most max_elements elements, up to iso."""
    base = product(opposite(c), d)
    mods = enumerate_modules(base, max_elements, max_total=max_elements)
    return [bimodule_to_prof(f, c, d) for f in mods]


def diagrams(vertices, max_elements, max_count=None):
    """All lax diagrams with the given vertices, edges up to iso, and all cells."""
    n = len(vertices) - 1
    keys = list(itertools.combinations(range(n + 1), 2))
    choices = [edge_profunctors(vertices[i].target, vertices[j].target, max_elements)
               for i, j in keys]
    count = 0
    for edges in itertools.product(*choices):
        edges = dict(zip(keys, edges))
        ts = triples(n)
        options = [prof_nats(compose_prof(edges[(i, j)], edges[(j, k)]), edges[(i, k)])
                   for i, j, k in ts]
        for cells in itertools.product(*options):
            d = LaxDiagram(vertices, edges, dict(zip(ts, cells)))
            if n >= 3 and validate_lax(d):
                continue
            yield d
            count += 1
            if max_count is not None and count >= max_count:
                return


def random_diagram(rng=None, n=None, max_elements=4, catalogue=None, tries=50):
    """A random coherent lax diagram of length <= 2."""
    rng = rng or random.Random()
    catalogue = catalogue or vertex_catalogue()
    n = rng.randint(0, 2) if n is None else n
    for _ in range(tries):
        vertices = [rng.choice(catalogue) for _ in range(n + 1)]
        edges = {(i, j): random_profunctor(vertices[i].target, vertices[j].target, rng,
                                           max_elements=max_elements)
                 for i, j in itertools.combinations(range(n + 1), 2)}
        cells = {}
        for i, j, k in triples(n):
            src = compose_prof(edges[(i, j)], edges[(j, k)])
            options = prof_nats(src, edges[(i, k)])
            if not options:
                break
            cells[(i, j, k)] = rng.choice(options)
        else:
            d = LaxDiagram(vertices, edges, cells, name="rand")
            if not validate_lax(d):
                return d
    raise RuntimeError("no coherent diagram found")
