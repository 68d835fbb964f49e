"""Monads on finite categories, their Kleisli and Eilenberg-Moore categories,
promonads and identity-on-objects functors."""

from __future__ import annotations

from dataclasses import dataclass

from .fincat import (
    FinCategory, FinFunctor, NatTransf, compose_functors, find_functors, identity_functor,
    identity_nat, is_bijective_on_objects, nat_set, split_tag, tag, validate_functor,
)
from .prof import (
    ProfMorphism, Profunctor, compose_prof, enumerate_modules, find_prof_iso, identity_morphism,
    identity_prof, left_unitor_inverse, associator, right_unitor_inverse, validate_prof,
    validate_prof_morphism, vcompose, whisker_left, whisker_right,
)


class Monad:
    def __init__(self, base, endo, unit, mult, name="T"):
        self.base = base
        self.endo = endo
        self.unit = unit
        self.mult = mult
        self.name = name

    def __repr__(self):
        return f"<Monad {self.name} on {self.base.name}>"

    def T(self, x):
        return self.endo.ob(x)

    def Tm(self, f):
        return self.endo.mor(f)

    def eta(self, x):
        return self.unit[x]

    def mu(self, x):
        return self.mult[x]


def validate_monad(t):
    c = t.base
    bad = validate_functor(t.endo)
    if bad:
        return [f"endofunctor: {b}" for b in bad]
    for x in c.objects:
        e = t.unit.components.get(x)
        if e is None or c.morphisms.get(e) != (x, t.T(x)):
            bad.append(f"unit component at {x} mistyped")
        m = t.mult.components.get(x)
        if m is None or c.morphisms.get(m) != (t.T(t.T(x)), t.T(x)):
            bad.append(f"multiplication component at {x} mistyped")
    if bad:
        return bad
    for f, (s, u) in c.morphisms.items():
        if c.comp(t.Tm(f), t.eta(s)) != c.comp(t.eta(u), f):
            bad.append(f"unit not natural at {f}")
        if c.comp(t.Tm(f), t.mu(s)) != c.comp(t.mu(u), t.Tm(t.Tm(f))):
            bad.append(f"multiplication not natural at {f}")
    for x in c.objects:
        tx = t.T(x)
        if c.comp(t.mu(x), t.eta(tx)) != c.id(tx):
            bad.append(f"left unit law fails at {x}")
        if c.comp(t.mu(x), t.Tm(t.eta(x))) != c.id(tx):
            bad.append(f"right unit law fails at {x}")
        if c.comp(t.mu(x), t.Tm(t.mu(x))) != c.comp(t.mu(x), t.mu(tx)):
            bad.append(f"associativity fails at {x}")
    return bad


# ----------------------------------------------------------------- sources

def identity_monad(c):
    i = identity_functor(c)
    n = identity_nat(i)
    return Monad(c, i, n, NatTransf(i, i, n.components), name="id")


def terminal_object(c):
    for z in c.objects:
        if all(len(c.hom(x, z)) == 1 for x in c.objects):
            return z
    return None


def constant_terminal_monad(c):
    """T x = terminal object; raises when there is none."""
    z = terminal_object(c)
    if z is None:
        raise ValueError("category has no terminal object")
    endo = FinFunctor(c, c, {x: z for x in c.objects}, {f: c.id(z) for f in c.morphisms},
                      name="const")
    unit = NatTransf(identity_functor(c), endo, {x: c.hom(x, z)[0] for x in c.objects})
    mult = NatTransf(compose_functors(endo, endo), endo, {x: c.id(z) for x in c.objects})
    return Monad(c, endo, unit, mult, name="const")


def closure_monad(c, closure):
    """Monad on a thin category from an object map that is monotone,
    inflationary and idempotent."""
    obmap = dict(closure)
    mormap = {}
    for f, (s, t) in c.morphisms.items():
        hom = c.hom(obmap[s], obmap[t])
        if len(hom) != 1:
            raise ValueError("closure map is not monotone on a thin category")
        mormap[f] = hom[0]
    endo = FinFunctor(c, c, obmap, mormap, name="cl")
    comps = {}
    for x in c.objects:
        hom = c.hom(x, obmap[x])
        if len(hom) != 1:
            raise ValueError("closure map is not inflationary")
        comps[x] = hom[0]
    mult = {}
    for x in c.objects:
        if obmap[obmap[x]] != obmap[x]:
            raise ValueError("closure map is not idempotent")
        mult[x] = c.id(obmap[x])
    return Monad(c, endo, NatTransf(identity_functor(c), endo, comps),
                 NatTransf(compose_functors(endo, endo), endo, mult), name="cl")


def find_monads(c, limit=None):
    """Exhaustive search for monads on c."""
    out = []
    ident = identity_functor(c)
    for t in find_functors(c, c):
        tt = compose_functors(t, t)
        for eta in nat_set(ident, t):
            for mu in nat_set(tt, t):
                m = Monad(c, t, eta, mu)
                if not validate_monad(m):
                    out.append(m)
                    if limit is not None and len(out) >= limit:
                        return out
    return out


def find_adjunctions(c, d, limit=None):
    """Triples (L: C -> D, R: D -> C, unit, counit) satisfying both triangle laws."""
    out = []
    for lf in find_functors(c, d):
        for rf in find_functors(d, c):
            rl = compose_functors(rf, lf)
            lr = compose_functors(lf, rf)
            for eta in nat_set(identity_functor(c), rl):
                for eps in nat_set(lr, identity_functor(d)):
                    ok = all(d.comp(eps[lf.ob(x)], lf.mor(eta[x])) == d.id(lf.ob(x))
                             for x in c.objects)
                    ok = ok and all(c.comp(rf.mor(eps[y]), eta[rf.ob(y)]) == c.id(rf.ob(y))
                                    for y in d.objects)
                    if ok:
                        out.append((lf, rf, eta, eps))
                        if limit is not None and len(out) >= limit:
                            return out
    return out


def monad_from_adjunction(lf, rf, eta, eps):
    """T = R.L with multiplication R eps L."""
    c = lf.source
    t = compose_functors(rf, lf)
    mult = NatTransf(compose_functors(t, t), t,
                     {x: rf.mor(eps[lf.ob(x)]) for x in c.objects})
    return Monad(c, t, NatTransf(identity_functor(c), t, eta.components), mult, name="RL")


# ----------------------------------------------------------------- Kleisli

def kleisli(t):
    """Kleisli category and the identity-on-objects functor j.

    A morphism x -> y is (h, y) with h: x -> Ty in the base; the target is
    part of the id because T need not be injective on objects.
    """
    c = t.base
    mors, comp = {}, {}
    for y in c.objects:
        for h, (x, ty) in c.morphisms.items():
            if ty == t.T(y):
                mors[tag(h, y)] = (x, y)
    raw = {m: split_tag(m) for m in mors}
    for f, (x, y) in mors.items():
        h = raw[f][0]
        for g, (y2, z) in mors.items():
            if y2 != y:
                continue
            k = raw[g][0]
            comp[(g, f)] = tag(c.comp(t.mu(z), t.Tm(k), h), z)
    ident = {x: tag(t.eta(x), x) for x in c.objects}
    k = FinCategory(c.objects, mors, ident, comp, name=f"Kl({t.name})")
    j = FinFunctor(c, k, {x: x for x in c.objects},
                   {u: tag(c.comp(t.eta(y), u), y) for u, (x, y) in c.morphisms.items()},
                   name="j")
    return k, j


@dataclass(frozen=True)
class EMAlgebra:
    carrier: str
    structure: str


def em_algebras(t):
    c = t.base
    out = []
    for x in c.objects:
        for a in c.hom(t.T(x), x):
            if c.comp(a, t.eta(x)) != c.id(x):
                continue
            if c.comp(a, t.Tm(a)) != c.comp(a, t.mu(x)):
                continue
            out.append(EMAlgebra(x, a))
    return out


def em_category(t):
    """Algebras (x, a: Tx -> x) and the maps commuting with structure."""
    c = t.base
    algs = em_algebras(t)
    names = {al: tag(al.carrier, al.structure) for al in algs}
    mors, comp, ident = {}, {}, {}
    for p in algs:
        for q in algs:
            for u in c.hom(p.carrier, q.carrier):
                if c.comp(u, p.structure) == c.comp(q.structure, t.Tm(u)):
                    mors[tag(names[p], u, names[q])] = (names[p], names[q])
    parts = {m: split_tag(m) for m in mors}
    for f, (a, b) in mors.items():
        for g, (b2, e) in mors.items():
            if b2 == b:
                comp[(g, f)] = tag(a, c.comp(parts[g][1], parts[f][1]), e)
    for p in algs:
        ident[names[p]] = tag(names[p], c.id(p.carrier), names[p])
    em = FinCategory([names[p] for p in algs], mors, ident, comp, name=f"EM({t.name})")
    forget = FinFunctor(em, c, {names[p]: p.carrier for p in algs},
                        {m: parts[m][1] for m in mors}, name="U")
    return em, forget


# --------------------------------------------------------------- promonads

class Promonad:
    def __init__(self, base, carrier, unit, mult, name="P"):
        self.base = base
        self.carrier = carrier
        self.unit = unit
        self.mult = mult
        self.name = name

    def __repr__(self):
        return f"<Promonad {self.name} on {self.base.name}: {len(self.carrier)} elements>"


def validate_promonad(p):
    bad = validate_prof(p.carrier)
    if bad:
        return [f"carrier: {b}" for b in bad]
    for name, a in (("unit", p.unit), ("mult", p.mult)):
        bad += [f"{name}: {b}" for b in validate_prof_morphism(a)]
    if bad:
        return bad
    m = p.carrier
    ident = identity_morphism(m).map
    left = vcompose(p.mult, vcompose(whisker_right(p.unit, m), left_unitor_inverse(m)))
    right = vcompose(p.mult, vcompose(whisker_left(m, p.unit), right_unitor_inverse(m)))
    if left.map != ident:
        bad.append("left unit law fails")
    if right.map != ident:
        bad.append("right unit law fails")
    a = associator(m, m, m)
    lhs = vcompose(p.mult, whisker_right(p.mult, m, src=a.source))
    rhs = vcompose(p.mult, vcompose(whisker_left(m, p.mult, src=a.target), a))
    if lhs.map != rhs.map:
        bad.append("associativity fails")
    return bad


def promonad_from_iof(j):
    """Carrier elements are the morphisms of the target, acted on through j."""
    if not is_bijective_on_objects(j):
        raise ValueError("functor is not bijective on objects")
    c, th = j.source, j.target
    back = {j.ob(x): x for x in c.objects}
    elements = {f: (back[s], back[t]) for f, (s, t) in th.morphisms.items()}
    left, right = {}, {}
    for f, (x, y) in elements.items():
        for u, (s, t) in c.morphisms.items():
            if t == x:
                left[(u, f)] = th.comp(f, j.mor(u))
            if s == y:
                right[(f, u)] = th.comp(j.mor(u), f)
    carrier = Profunctor(c, c, elements, left, right, name=f"P({th.name})")
    unit = ProfMorphism(identity_prof(c), carrier, {u: j.mor(u) for u in c.morphisms})
    sq = compose_prof(carrier, carrier)
    mult = ProfMorphism(sq, carrier, {cls: th.comp(g, f) for cls, (f, g) in sq.rep_pair.items()})
    return Promonad(c, carrier, unit, mult, name=f"P({th.name})")


def iof_from_promonad(p):
    """Category with the carrier elements as morphisms, and j = unit."""
    c, m = p.base, p.carrier
    sq = p.mult.source
    comp = {}
    for f, (x, y) in m.elements.items():
        for g in _starting_at(m, y):
            comp[(g, f)] = p.mult.map[sq.pair_class[(f, g)]]
    ident = {x: p.unit.map[c.id(x)] for x in c.objects}
    th = FinCategory(c.objects, dict(m.elements), ident, comp, name=f"Th({p.name})")
    j = FinFunctor(c, th, {x: x for x in c.objects}, {u: p.unit.map[u] for u in c.morphisms},
                   name="j")
    return j


def _starting_at(m, y):
    return [e for e, (a, _) in m.elements.items() if a == y]


def iof_roundtrip_witness(j):
    """Isomorphism iof(promonad(j)) -> target of j commuting with j."""
    j2 = iof_from_promonad(promonad_from_iof(j))
    th2, th = j2.target, j.target
    w = FinFunctor(th2, th, {x: j.ob(x) for x in th2.objects},
                   {f: f for f in th2.morphisms}, name="w")
    ok = (not validate_functor(w) and len(th2.morphisms) == len(th.morphisms)
          and all(w.mor(j2.mor(u)) == j.mor(u) for u in j.source.morphisms))
    return w, ok


def promonad_roundtrip_witness(p):
    """Carrier isomorphism promonad(iof(p)) -> p preserving unit and mult."""
    q = promonad_from_iof(iof_from_promonad(p))
    w = ProfMorphism(q.carrier, p.carrier, {e: e for e in q.carrier.elements})
    ok = not validate_prof_morphism(w)
    ok = ok and all(w.map[q.unit.map[u]] == p.unit.map[u] for u in p.base.morphisms)
    sq_q = q.mult.source
    ok = ok and all(w.map[q.mult.map[cls]] == p.mult.map[p.mult.source.pair_class[pair]]
                    for cls, pair in sq_q.rep_pair.items())
    return w, ok


def kleisli_promonad(t):
    _, j = kleisli(t)
    return promonad_from_iof(j)


def identity_promonad(c):
    ip = identity_prof(c)
    sq = compose_prof(ip, ip)
    return Promonad(c, ip, identity_morphism(ip),
                    ProfMorphism(sq, ip, {cls: c.comp(g, f) for cls, (f, g) in sq.rep_pair.items()}),
                    name="id")


# -------------------------------------------------------- module algebras

class ModuleAlgebra:
    def __init__(self, module, action):
        self.module = module
        self.action = action

    def __repr__(self):
        return f"<ModuleAlgebra on {len(self.module)} elements>"


def is_module_action(p, f, a):
    """Unit and associativity for a: compose(F, P) => F."""
    if validate_prof_morphism(a):
        return False
    ident = identity_morphism(f).map
    unit = vcompose(a, vcompose(whisker_left(f, p.unit, tgt=a.source), right_unitor_inverse(f)))
    if unit.map != ident:
        return False
    assoc = associator(f, p.carrier, p.carrier)
    fp = a.source
    lhs = vcompose(a, whisker_right(a, p.carrier, src=assoc.source, tgt=compose_prof(f, p.carrier)))
    rhs = vcompose(a, vcompose(whisker_left(f, p.mult, src=assoc.target, tgt=fp), assoc))
    return lhs.map == rhs.map


def module_actions(p, f):
    from .prof import prof_nats
    fp = compose_prof(f, p.carrier)
    return [a for a in prof_nats(fp, f) if is_module_action(p, f, a)]


def algebra_to_module(p, alg):
    """The module over the identity-on-objects target with x.theta = a[x, theta]."""
    j = iof_from_promonad(p)
    f, a = alg.module, alg.action
    th = j.target
    fp = a.source
    right = {}
    for e, (_, x) in f.elements.items():
        for theta, (s, _) in th.morphisms.items():
            if s == x:
                right[(e, theta)] = a.map[fp.pair_class[(e, theta)]]
    return Profunctor(f.source, th, f.elements, dict(f.left), right, name=f"{f.name}^")


def module_to_algebra(p, g):
    """Restrict a module over the target of j and record the action."""
    j = iof_from_promonad(p)
    c = p.base
    f = Profunctor(g.source, c, g.elements, dict(g.left),
                   {(e, u): g.right[(e, j.mor(u))] for e, (_, x) in g.elements.items()
                    for u in c.morphisms if c.src(u) == x}, name=g.name)
    fp = compose_prof(f, p.carrier)
    a = ProfMorphism(fp, f, {cls: g.right[(e, theta)] for cls, (e, theta) in fp.rep_pair.items()})
    return ModuleAlgebra(f, a)


def promonad_module_algebras(p, cap, up_to_iso=True):
    """Pairs (F, a) with F a module over the base, fibers <= cap, a an action.

    With up_to_iso, pairs are compared as modules over the identity-on-objects
    category of p.
    """
    out = []
    seen = []
    for f in enumerate_modules(p.base, cap):
        for a in module_actions(p, f):
            alg = ModuleAlgebra(f, a)
            if up_to_iso:
                g = algebra_to_module(p, alg)
                if any(find_prof_iso(g, h) is not None for h in seen):
                    continue
                seen.append(g)
            out.append(alg)
    return out
