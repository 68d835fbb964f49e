"""Finite categories given by explicit tables, functors, natural
transformations, flags and the free coCartesian fibration."""

from __future__ import annotations

import itertools
from collections import deque


class StructuralError(ValueError):
    """A table refers to an object or morphism that does not exist."""


def tag(*parts):
    """Build a compound identifier from identifier parts."""
    return "(" + ",".join(str(p) for p in parts) + ")"


class FinCategory:
    """A finite category.

    objects: sequence of object ids
    morphisms: mapping id -> (source, target), in a fixed order
    identity: mapping object -> morphism id
    compose: mapping (g, f) -> g.f, defined when target(f) == source(g)
    """

    def __init__(self, objects, morphisms, identity, compose, name=""):
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.identity = dict(identity)
        self.compose = dict(compose)
        self.name = name
        self._hom = None

    def __repr__(self):
        label = self.name or "FinCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (set(self.objects) == set(other.objects)
                and self.morphisms == other.morphisms
                and self.identity == other.identity
                and self.compose == other.compose)

    __hash__ = None

    def src(self, f):
        return self.morphisms[f][0]

    def tgt(self, f):
        return self.morphisms[f][1]

    def id(self, x):
        return self.identity[x]

    def comp(self, *fs):
        """comp(h, g, f) is h.g.f"""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose[(g, out)]
        return out

    def hom(self, x, y):
        if self._hom is None:
            table = {}
            for f, (s, t) in self.morphisms.items():
                table.setdefault((s, t), []).append(f)
            self._hom = {k: tuple(v) for k, v in table.items()}
        return self._hom.get((x, y), ())

    def is_identity(self, f):
        s, t = self.morphisms[f]
        return s == t and self.identity[s] == f

    def nonidentity(self):
        return [f for f in self.morphisms if not self.is_identity(f)]

    def composable_pairs(self):
        for f, (_, t) in self.morphisms.items():
            for g in self.morphisms:
                if self.morphisms[g][0] == t:
                    yield g, f


def check_structure(c):
    """Raise StructuralError when a table mentions unknown ids."""
    objs = set(c.objects)
    if len(objs) != len(c.objects):
        raise StructuralError("duplicate object id")
    for f, st in c.morphisms.items():
        if len(st) != 2 or st[0] not in objs or st[1] not in objs:
            raise StructuralError(f"morphism {f} has an unknown endpoint {st}")
    for x, i in c.identity.items():
        if x not in objs:
            raise StructuralError(f"identity declared for unknown object {x}")
        if i not in c.morphisms:
            raise StructuralError(f"identity of {x} is unknown morphism {i}")
    for x in objs:
        if x not in c.identity:
            raise StructuralError(f"object {x} has no identity")
    for (g, f), h in c.compose.items():
        for m in (g, f, h):
            if m not in c.morphisms:
                raise StructuralError(f"composition row {g} o {f} = {h} mentions unknown {m}")


def validate_category(c):
    """Return the list of violated axioms; empty means c is a category."""
    check_structure(c)
    bad = []
    for x in c.objects:
        i = c.identity[x]
        if c.morphisms[i] != (x, x):
            bad.append(f"identity {i} of {x} is not an endomorphism of {x}")
    for (g, f), h in c.compose.items():
        if c.tgt(f) != c.src(g):
            bad.append(f"composite {g} o {f} defined for non-composable pair")
        elif c.morphisms[h] != (c.src(f), c.tgt(g)):
            bad.append(f"typing: {g} o {f} = {h} should run {c.src(f)} -> {c.tgt(g)}")
    for g, f in c.composable_pairs():
        if (g, f) not in c.compose:
            bad.append(f"composite {g} o {f} missing")
    if bad:
        return bad
    for f in c.morphisms:
        s, t = c.morphisms[f]
        if c.compose[(c.identity[t], f)] != f or c.compose[(f, c.identity[s])] != f:
            bad.append(f"unit law fails at {f}")
    for g, f in c.composable_pairs():
        gf = c.compose[(g, f)]
        for h in c.morphisms:
            if c.src(h) != c.tgt(g):
                continue
            if c.compose[(h, gf)] != c.compose[(c.compose[(h, g)], f)]:
                bad.append(f"associativity fails at {h}, {g}, {f}")
    return bad


def is_valid_category(c):
    try:
        return not validate_category(c)
    except StructuralError:
        return False


# ---------------------------------------------------------------- builders

def terminal(obj="*"):
    i = f"id_{obj}"
    return FinCategory([obj], {i: (obj, obj)}, {obj: i}, {(i, i): i}, name="*")


def discrete(names):
    names = list(names)
    ids = {x: f"id_{x}" for x in names}
    return FinCategory(names, {ids[x]: (x, x) for x in names}, ids,
                       {(ids[x], ids[x]): ids[x] for x in names},
                       name="discrete")


def preorder(objects, leq, name="preorder"):
    """Thin category from a reflexive transitive relation leq(x, y)."""
    objects = list(objects)

    def mid(x, y):
        return f"id_{x}" if x == y else f"{x}_{y}"

    mors, comp = {}, {}
    for x in objects:
        for y in objects:
            if leq(x, y):
                mors[mid(x, y)] = (x, y)
    for x, y, z in itertools.product(objects, repeat=3):
        if leq(x, y) and leq(y, z):
            comp[(mid(y, z), mid(x, y))] = mid(x, z)
    return FinCategory(objects, mors, {x: mid(x, x) for x in objects}, comp, name=name)


def simplex_category(n):
    """The poset [n] = {0 < 1 < ... < n}."""
    return preorder([str(i) for i in range(n + 1)], lambda a, b: int(a) <= int(b), name=f"[{n}]")


def codiscrete(names):
    return preorder(names, lambda a, b: True, name="codiscrete")


def walking_iso():
    return codiscrete(["x", "y"])


def monoid_category(elements, mult, unit, obj="*", name="monoid"):
    """One-object category; mult(a, b) is the product a.b (apply b first)."""
    elements = list(elements)
    mors = {a: (obj, obj) for a in elements}
    comp = {(a, b): mult(a, b) for a in elements for b in elements}
    return FinCategory([obj], mors, {obj: unit}, comp, name=name)


def cyclic_group(n, obj="*"):
    els = ["e"] + [f"g{k}" for k in range(1, n)]

    def mult(a, b):
        k = (els.index(a) + els.index(b)) % n
        return els[k]

    return monoid_category(els, mult, "e", obj=obj, name=f"Z/{n}")


def concrete_category(sizes, generators, name="concrete"):
    """Subcategory of finite sets generated by functions.

    sizes: object -> cardinality; generators: id -> (src, tgt, values).
    Composites get ids derived from their value tuples.
    """
    objects = list(sizes)
    by_key = {}
    mors = {}
    ident = {}
    for x in objects:
        key = (x, x, tuple(range(sizes[x])))
        by_key[key] = f"id_{x}"
        mors[f"id_{x}"] = (x, x)
        ident[x] = f"id_{x}"
    for g, (s, t, vals) in generators.items():
        key = (s, t, tuple(vals))
        if key not in by_key:
            by_key[key] = g
            mors[g] = (s, t)
    changed = True
    while changed:
        changed = False
        keys = list(by_key)
        for k1 in keys:
            for k2 in keys:
                if k1[1] != k2[0]:
                    continue
                vals = tuple(k2[2][v] for v in k1[2])
                key = (k1[0], k2[1], vals)
                if key not in by_key:
                    nm = f"{key[0]}{key[1]}_" + "".join(map(str, vals))
                    while nm in mors:
                        nm += "'"
                    by_key[key] = nm
                    mors[nm] = (key[0], key[1])
                    changed = True
    comp = {}
    for k1, f in by_key.items():
        for k2, g in by_key.items():
            if k1[1] == k2[0]:
                vals = tuple(k2[2][v] for v in k1[2])
                comp[(g, f)] = by_key[(k1[0], k2[1], vals)]
    order = sorted(mors, key=lambda m: (not m.startswith("id_"), objects.index(mors[m][0]),
                                        objects.index(mors[m][1]), m))
    return FinCategory(objects, {m: mors[m] for m in order}, ident, comp, name=name)


def full_subcategory(c, objs, name=None):
    objs = [x for x in c.objects if x in set(objs)]
    keep = {f: st for f, st in c.morphisms.items() if st[0] in objs and st[1] in objs}
    comp = {k: v for k, v in c.compose.items() if k[0] in keep and k[1] in keep}
    return FinCategory(objs, keep, {x: c.identity[x] for x in objs}, comp,
                       name=name or f"full({c.name})")


def subcategory(c, mors, name=None):
    """Wide subcategory on a set of morphisms closed under composition."""
    mors = set(mors) | set(c.identity.values())
    keep = {f: st for f, st in c.morphisms.items() if f in mors}
    comp = {k: v for k, v in c.compose.items() if k[0] in mors and k[1] in mors}
    for v in comp.values():
        if v not in mors:
            raise ValueError("morphism set not closed under composition")
    return FinCategory(c.objects, keep, c.identity, comp, name=name or f"sub({c.name})")


def product(c, d, name=None):
    objs = [tag(x, y) for x in c.objects for y in d.objects]
    mors = {tag(f, g): (tag(c.src(f), d.src(g)), tag(c.tgt(f), d.tgt(g)))
            for f in c.morphisms for g in d.morphisms}
    ident = {tag(x, y): tag(c.id(x), d.id(y)) for x in c.objects for y in d.objects}
    comp = {}
    for (f2, f1), f in c.compose.items():
        for (g2, g1), g in d.compose.items():
            comp[(tag(f2, g2), tag(f1, g1))] = tag(f, g)
    return FinCategory(objs, mors, ident, comp, name=name or f"{c.name}x{d.name}")


def coproduct(cats, name="coproduct"):
    """Disjoint union; ids are tagged by position."""
    objs, mors, ident, comp = [], {}, {}, {}
    for k, c in enumerate(cats):
        for x in c.objects:
            objs.append(tag(k, x))
            ident[tag(k, x)] = tag(k, c.id(x))
        for f, (s, t) in c.morphisms.items():
            mors[tag(k, f)] = (tag(k, s), tag(k, t))
        for (g, f), h in c.compose.items():
            comp[(tag(k, g), tag(k, f))] = tag(k, h)
    return FinCategory(objs, mors, ident, comp, name=name)


def opposite(c):
    comp = {(f, g): h for (g, f), h in c.compose.items()}
    return FinCategory(c.objects, {f: (t, s) for f, (s, t) in c.morphisms.items()},
                       c.identity, comp, name=f"{c.name}^op")


def rename_category(c, obmap, mormap):
    return FinCategory([obmap[x] for x in c.objects],
                       {mormap[f]: (obmap[s], obmap[t]) for f, (s, t) in c.morphisms.items()},
                       {obmap[x]: mormap[i] for x, i in c.identity.items()},
                       {(mormap[g], mormap[f]): mormap[h] for (g, f), h in c.compose.items()},
                       name=c.name)


def generating_set(c):
    """A small set of non-identity morphisms whose composites give every morphism."""
    gens = []
    reached = set(c.identity.values())
    for f in c.nonidentity():
        if f in reached:
            continue
        gens.append(f)
        reached = _closure(c, reached | {f})
    return gens


def _closure(c, mors):
    mors = set(mors)
    queue = deque(mors)
    while queue:
        f = queue.popleft()
        for g in list(mors):
            for a, b in ((g, f), (f, g)):
                if c.src(a) == c.tgt(b):
                    h = c.compose[(a, b)]
                    if h not in mors:
                        mors.add(h)
                        queue.append(h)
    return mors


# ------------------------------------------------------------ isomorphisms

def inverse(c, f):
    s, t = c.morphisms[f]
    for g in c.hom(t, s):
        if c.compose[(g, f)] == c.identity[s] and c.compose[(f, g)] == c.identity[t]:
            return g
    return None


def is_iso(c, f):
    return inverse(c, f) is not None


def core(c):
    """Maximal subgroupoid: same objects, exactly the invertible morphisms."""
    return subcategory(c, [f for f in c.morphisms if is_iso(c, f)], name=f"core({c.name})")


def is_groupoid(c):
    return all(is_iso(c, f) for f in c.morphisms)


def iso_classes(c):
    """Partition of the objects into isomorphism classes, in object order."""
    seen, classes = set(), []
    for x in c.objects:
        if x in seen:
            continue
        cls = [y for y in c.objects
               if y not in seen and any(is_iso(c, f) for f in c.hom(x, y))]
        seen.update(cls)
        classes.append(cls)
    return classes


# ---------------------------------------------------------------- functors

class FinFunctor:
    def __init__(self, source, target, obmap, mormap, name=""):
        self.source = source
        self.target = target
        self.obmap = dict(obmap)
        self.mormap = dict(mormap)
        self.name = name

    def __repr__(self):
        return f"<FinFunctor {self.name or ''} {self.source.name} -> {self.target.name}>"

    def __eq__(self, other):
        if not isinstance(other, FinFunctor):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.obmap == other.obmap and self.mormap == other.mormap)

    __hash__ = None

    def ob(self, x):
        return self.obmap[x]

    def mor(self, f):
        return self.mormap[f]


def validate_functor(f):
    c, d = f.source, f.target
    bad = []
    for x in c.objects:
        if f.obmap.get(x) not in d.identity:
            return [f"object {x} not sent to an object"]
    for m in c.morphisms:
        if f.mormap.get(m) not in d.morphisms:
            return [f"morphism {m} not sent to a morphism"]
    for m, (s, t) in c.morphisms.items():
        if d.morphisms[f.mormap[m]] != (f.obmap[s], f.obmap[t]):
            bad.append(f"{m} not sent over its endpoints")
    for x in c.objects:
        if f.mormap[c.id(x)] != d.id(f.obmap[x]):
            bad.append(f"identity of {x} not preserved")
    if bad:
        return bad
    for (g, h), k in c.compose.items():
        if d.compose[(f.mormap[g], f.mormap[h])] != f.mormap[k]:
            bad.append(f"composite {g} o {h} not preserved")
    return bad


def identity_functor(c):
    return FinFunctor(c, c, {x: x for x in c.objects}, {m: m for m in c.morphisms}, name="id")


def compose_functors(g, f):
    """g after f."""
    return FinFunctor(f.source, g.target,
                      {x: g.obmap[f.obmap[x]] for x in f.source.objects},
                      {m: g.mormap[f.mormap[m]] for m in f.source.morphisms},
                      name=f"{g.name}.{f.name}")


def inclusion(sub, c):
    return FinFunctor(sub, c, {x: x for x in sub.objects}, {m: m for m in sub.morphisms},
                      name="incl")


def constant_functor(c, d, x):
    return FinFunctor(c, d, {y: x for y in c.objects}, {m: d.id(x) for m in c.morphisms},
                      name=f"const_{x}")


def is_bijective_on_objects(f):
    vals = [f.obmap[x] for x in f.source.objects]
    return len(set(vals)) == len(vals) and set(vals) == set(f.target.objects)


def is_surjective_on_objects(f):
    return set(f.obmap.values()) >= set(f.target.objects)


def find_functors(c, d, obmap=None, bijective=False, limit=None):
    """All functors c -> d (optionally with a fixed object map)."""
    mors = list(c.morphisms)
    entries = {}
    for (g, f), h in c.compose.items():
        for m in {g, f, h}:
            entries.setdefault(m, []).append((g, f, h))
    ob_choices = [obmap] if obmap is not None else (
        dict(zip(c.objects, vals)) for vals in itertools.product(d.objects, repeat=len(c.objects)))
    out = []
    for om in ob_choices:
        if bijective and (len(set(om.values())) != len(om) or len(om) != len(d.objects)):
            continue
        mm = {}
        used = set()

        def consistent(m):
            for g, f, h in entries.get(m, ()):
                if g in mm and f in mm and h in mm:
                    if d.compose[(mm[g], mm[f])] != mm[h]:
                        return False
            return True

        def rec(k):
            if limit is not None and len(out) >= limit:
                return
            if k == len(mors):
                out.append(FinFunctor(c, d, om, dict(mm)))
                return
            m = mors[k]
            s, t = c.morphisms[m]
            if c.identity[s] == m:
                cands = [d.id(om[s])]
            else:
                cands = d.hom(om[s], om[t])
            for v in cands:
                if bijective and v in used:
                    continue
                mm[m] = v
                used.add(v)
                if consistent(m):
                    rec(k + 1)
                used.discard(v)
                del mm[m]

        if bijective and len(c.morphisms) != len(d.morphisms):
            continue
        rec(0)
        if limit is not None and len(out) >= limit:
            break
    return out


def find_isomorphism(c, d):
    """An isomorphism of categories c -> d, or None."""
    if len(c.objects) != len(d.objects) or len(c.morphisms) != len(d.morphisms):
        return None
    found = find_functors(c, d, bijective=True, limit=1)
    return found[0] if found else None


# ------------------------------------------------- natural transformations

class NatTransf:
    def __init__(self, source, target, components):
        self.source = source
        self.target = target
        self.components = dict(components)

    def __repr__(self):
        return f"<NatTransf {self.components}>"

    def __eq__(self, other):
        if not isinstance(other, NatTransf):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def __getitem__(self, x):
        return self.components[x]


def _check_parallel(f, g):
    if not (f.source == g.source and f.target == g.target):
        raise ValueError("functors are not parallel")


def validate_nat(alpha):
    f, g = alpha.source, alpha.target
    c, d = f.source, f.target
    bad = []
    for x in c.objects:
        a = alpha.components.get(x)
        if a is None or d.morphisms.get(a) != (f.ob(x), g.ob(x)):
            bad.append(f"component at {x} has the wrong type")
    if bad:
        return bad
    for m, (s, t) in c.morphisms.items():
        if d.comp(g.mor(m), alpha[s]) != d.comp(alpha[t], f.mor(m)):
            bad.append(f"naturality fails at {m}")
    return bad


def nat_set(f, g):
    """Every natural transformation f => g."""
    _check_parallel(f, g)
    c, d = f.source, f.target
    objs = list(c.objects)
    pos = {x: k for k, x in enumerate(objs)}
    checks = {x: [] for x in objs}
    for m, (s, t) in c.morphisms.items():
        checks[objs[max(pos[s], pos[t])]].append((m, s, t))
    out = []
    comps = {}

    def rec(k):
        if k == len(objs):
            out.append(NatTransf(f, g, dict(comps)))
            return
        x = objs[k]
        for a in d.hom(f.ob(x), g.ob(x)):
            comps[x] = a
            if all(d.comp(g.mor(m), comps[s]) == d.comp(comps[t], f.mor(m))
                   for m, s, t in checks[x]):
                rec(k + 1)
        comps.pop(x, None)

    rec(0)
    return out


def identity_nat(f):
    return NatTransf(f, f, {x: f.target.id(f.ob(x)) for x in f.source.objects})


# ------------------------------------------------------------------- flags

class FlaggedCategory:
    """A category with a groupoid of objects mapping onto it."""

    def __init__(self, base, flag, flag_map):
        self.base = base
        self.flag = flag
        self.flag_map = flag_map

    def __repr__(self):
        return f"<FlaggedCategory base={self.base.name} flag={self.flag.name}>"


def discrete_flag(c):
    d = discrete(c.objects)
    return FlaggedCategory(c, d, FinFunctor(d, c, {x: x for x in c.objects},
                                            {d.id(x): c.id(x) for x in c.objects}))


def core_flag(c):
    k = core(c)
    return FlaggedCategory(c, k, inclusion(k, c))


def validate_flagged(fc):
    bad = validate_functor(fc.flag_map)
    if bad:
        return bad
    if not is_groupoid(fc.flag):
        bad.append("flag is not a groupoid")
    if not is_surjective_on_objects(fc.flag_map):
        bad.append("flag map is not surjective on objects")
    for m in fc.flag.morphisms:
        if not is_iso(fc.base, fc.flag_map.mor(m)):
            bad.append(f"flag morphism {m} lands on a non-invertible morphism")
    return bad


def complete_flagged(fc):
    return core_flag(fc.base)


def is_complete(fc):
    """Flag map is essentially surjective and fully faithful onto the core."""
    f, base = fc.flag_map, fc.base
    reached = set(f.obmap.values())
    for y in base.objects:
        if y not in reached and not any(
                is_iso(base, m) for x in reached for m in base.hom(x, y)):
            return False
    for x in fc.flag.objects:
        for y in fc.flag.objects:
            image = [f.mor(m) for m in fc.flag.hom(x, y)]
            isos = [m for m in base.hom(f.ob(x), f.ob(y)) if is_iso(base, m)]
            if len(set(image)) != len(image) or set(image) != set(isos):
                return False
    return True


# ---------------------------------------------- free coCartesian fibration

def _check_wide(c, d):
    d = set(d)
    bad = [x for x in c.objects if c.id(x) not in d]
    if bad:
        raise ValueError(f"subcategory misses identities of {bad}")
    for f in d:
        for g in d:
            if c.src(g) == c.tgt(f) and c.compose[(g, f)] not in d:
                raise ValueError(f"subcategory not closed: {g} o {f}")
    return d


def free_cocart_fibration(p, d):
    """Projection to the base of the comma category E x_C Arr(d).

    Objects (e, f: p(e) -> y) with f in d; a morphism (e, f) -> (e', f') is a
    pair (u: e -> e', v: y -> y') with v.f = f'.p(u).
    """
    e_cat, c = p.source, p.target
    d = _check_wide(c, d)
    objs, where = [], {}
    for e in e_cat.objects:
        for f in c.morphisms:
            if f in d and c.src(f) == p.ob(e):
                o = tag(e, f)
                objs.append(o)
                where[o] = (e, f)
    mors, ident, comp = {}, {}, {}
    for o1 in objs:
        e1, f1 = where[o1]
        for o2 in objs:
            e2, f2 = where[o2]
            for u in e_cat.hom(e1, e2):
                for v in c.hom(c.tgt(f1), c.tgt(f2)):
                    if c.comp(v, f1) == c.comp(f2, p.mor(u)):
                        mors[tag(u, v, f1, f2)] = (o1, o2)
    for o in objs:
        e, f = where[o]
        ident[o] = tag(e_cat.id(e), c.id(c.tgt(f)), f, f)
    parts = {}
    for m in mors:
        parts[m] = _split_tag(m)
    for m1, (a, b) in mors.items():
        u1, v1, f1, _ = parts[m1]
        for m2, (b2, c2) in mors.items():
            if b2 != b:
                continue
            u2, v2, _, f3 = parts[m2]
            comp[(m2, m1)] = tag(e_cat.comp(u2, u1), c.comp(v2, v1), f1, f3)
    total = FinCategory(objs, mors, ident, comp, name="comma")
    q = FinFunctor(total, c, {o: c.tgt(where[o][1]) for o in objs},
                   {m: parts[m][1] for m in mors}, name="q")
    return q


def _split_tag(s):
    """Inverse of tag for one level of nesting."""
    assert s[0] == "(" and s[-1] == ")"
    out, depth, cur = [], 0, []
    for ch in s[1:-1]:
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
            continue
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        cur.append(ch)
    out.append("".join(cur))
    return out


split_tag = _split_tag


def comma_unit(p, q):
    """The inclusion e -> (e, id), u -> (u, p(u)) into the comma category."""
    e_cat, c = p.source, p.target
    obmap = {e: tag(e, c.id(p.ob(e))) for e in e_cat.objects}
    mormap = {}
    for u, (a, b) in e_cat.morphisms.items():
        mormap[u] = tag(u, p.mor(u), c.id(p.ob(a)), c.id(p.ob(b)))
    return FinFunctor(e_cat, q.source, obmap, mormap, name="unit")


def has_cocartesian_lifts(p, d):
    """Decide whether every d-morphism out of p(e) has a coCartesian lift.

    Returns (verdict, witnesses) where witnesses maps (e, f) to a lift or None.
    A lift of f: p(e) -> y is phi: e -> x over f such that for every z the map
    Hom(x, z) -> Hom(e, z) x_{Hom(pe, pz)} Hom(y, pz) is a bijection.
    """
    e_cat, c = p.source, p.target
    d = _check_wide(c, d)
    witnesses = {}
    for e in e_cat.objects:
        for f in c.morphisms:
            if f not in d or c.src(f) != p.ob(e):
                continue
            y = c.tgt(f)
            found = None
            for x in e_cat.objects:
                if p.ob(x) != y:
                    continue
                for phi in e_cat.hom(e, x):
                    if p.mor(phi) == f and _is_cocartesian(p, phi):
                        found = phi
                        break
                if found:
                    break
            witnesses[(e, f)] = found
    return all(v is not None for v in witnesses.values()), witnesses


def _is_cocartesian(p, phi):
    e_cat, c = p.source, p.target
    e, x = e_cat.morphisms[phi]
    f = p.mor(phi)
    y = c.tgt(f)
    for z in e_cat.objects:
        pairs = {(chi, w) for chi in e_cat.hom(e, z) for w in c.hom(y, p.ob(z))
                 if p.mor(chi) == c.comp(w, f)}
        image = [(e_cat.comp(psi, phi), p.mor(psi)) for psi in e_cat.hom(x, z)]
        if len(set(image)) != len(image) or set(image) != pairs:
            return False
    return True


def universal_arrow(r, b, allowed=None):
    """Search for (a, eta: b -> r(a)) universal from b to r.

    allowed(eta) may restrict the candidate unit morphisms.
    """
    a_cat, b_cat = r.source, r.target
    for a in a_cat.objects:
        for eta in b_cat.hom(b, r.ob(a)):
            if allowed is not None and not allowed(eta):
                continue
            ok = True
            for a2 in a_cat.objects:
                image = [b_cat.comp(r.mor(m), eta) for m in a_cat.hom(a, a2)]
                target = b_cat.hom(b, r.ob(a2))
                if len(set(image)) != len(image) or set(image) != set(target):
                    ok = False
                    break
            if ok:
                return a, eta
    return None


def left_adjoint_search(r, allowed=None):
    """Universal arrows for every object, or None when some object has none."""
    out = {}
    for b in r.target.objects:
        found = universal_arrow(r, b, allowed)
        if found is None:
            return None
        out[b] = found
    return out


def unit_has_left_adjoint(p, d):
    """Whether the comma unit has a left adjoint over the base.

    Over the base means the unit components have identity image in C.
    """
    q = free_cocart_fibration(p, d)
    iota = comma_unit(p, q)
    c = p.target
    return left_adjoint_search(iota, allowed=lambda m: c.is_identity(q.mor(m))) is not None
