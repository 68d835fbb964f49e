"""Categories with arities, theories, models, goodness and completion.

Everything lives over the terminal base: a theory is an identity-on-objects
functor t: T0 -> T1 together with flags on both ends and arities on T0.
"""

from __future__ import annotations

import itertools

from .fincat import (
    FinCategory, FinFunctor, compose_functors, core_flag, discrete_flag, full_subcategory,
    inverse, is_bijective_on_objects, is_complete, is_surjective_on_objects, iso_classes,
    opposite, split_tag, tag, validate_category, validate_flagged, validate_functor,
)
from .laxdiag import Unsaturated, is_isomorphism
from .monad import Promonad, kleisli, kleisli_promonad, promonad_from_iof, validate_monad
from .prof import (
    ProfMorphism, Profunctor, adjunction_counit, adjunction_unit, companion, compose_prof,
    conjoint, enumerate_modules, find_prof_iso, is_iso_morphism, module_apply, prof_nats,
    restrict_module,
)

__all__ = [
    "AritySpec", "Dense", "Explicit", "Transported", "nerve", "nerve_ff", "respects_arities",
    "Theory", "validate_theory", "theory_from_monad", "monad_from_theory", "models",
    "LboResult", "l_bo", "Unsaturated", "GoodnessReport", "is_good", "complete_theory",
    "models_invariance", "skeleton", "theories_isomorphic", "ArityError", "Completion",
    "CompletedTheory", "InvarianceReport", "EquivalenceReport", "model_algebra_equivalence",
    "indexed_theory_check", "carrier_to_morphisms", "completion_data",
]


class ArityError(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ------------------------------------------------------------------ arities

class AritySpec:
    """A distinguished class of modules over a finite category."""

    base = None

    def membership(self, f):
        raise NotImplementedError

    def members(self, cap):
        """Members with fibers <= cap, one per isomorphism class."""
        return [f for f in enumerate_modules(self.base, cap) if self.membership(f)]


class Dense(AritySpec):
    """Modules right Kan extended from a full subcategory A.

    F is a member when F(x) -> {compatible families (h: x -> a) -> F(a)} is a
    bijection for every x, i.e. F is recovered from its restriction to A.
    With A = every object this is every module.
    """

    def __init__(self, base, objects):
        self.base = base
        self.objects = [x for x in base.objects if x in set(objects)]

    def __repr__(self):
        return f"<Dense arities on {self.base.name}: {self.objects}>"

    def membership(self, f):
        c = self.base
        if f.target != c:
            return False
        inside = set(self.objects)
        a_mors = [k for k, (s, t) in c.morphisms.items() if s in inside and t in inside]
        for x in c.objects:
            legs = [h for a in self.objects for h in c.hom(x, a)]
            seen = set()
            for e in f.fiber("*", x):
                seen.add(tuple(f.right[(e, h)] for h in legs))
            if len(seen) != len(f.fiber("*", x)):
                return False
            if len(seen) != _count_families(c, f, legs, a_mors):
                return False
        return True


def _count_families(c, f, legs, a_mors):
    """Compatible families over the legs x -> a into A."""
    pos = {h: k for k, h in enumerate(legs)}
    rules = []
    for h in legs:
        for k in a_mors:
            if c.src(k) == c.tgt(h):
                rules.append((pos[h], k, pos[c.comp(k, h)]))
    count = 0
    for fam in itertools.product(*[f.fiber("*", c.tgt(h)) for h in legs]):
        if all(f.right[(fam[a], k)] == fam[b] for a, k, b in rules):
            count += 1
    return count


class Explicit(AritySpec):
    """An isomorphism-closed class given by a finite list of modules."""

    def __init__(self, base, modules):
        self.base = base
        self.modules = list(modules)

    def __repr__(self):
        return f"<Explicit arities on {self.base.name}: {len(self.modules)} modules>"

    def membership(self, f):
        return any(f.target == m.target and find_prof_iso(f, m) is not None
                   for m in self.modules)

    def members(self, cap):
        return [m for m in self.modules
                if all(len(m.fiber("*", x)) <= cap for x in self.base.objects)]


class Transported(AritySpec):
    """Essential image of a class along u_!, for u: T0 -> T0'.

    G is a member when u^* G is a member and u_! u^* G is isomorphic to G.
    """

    def __init__(self, spec, u):
        self.spec = spec
        self.u = u
        self.base = u.target
        self._push = companion(u)

    def __repr__(self):
        return f"<Transported arities along {self.u.name}>"

    def membership(self, g):
        if g.target != self.base:
            return False
        h = restrict_module(g, self.u)
        if not self.spec.membership(h):
            return False
        return find_prof_iso(module_apply(self._push, h), g) is not None


def nerve(c, objects):
    """X -> Hom(a, X) for a in A, each as a presheaf on A (a module over A^op)."""
    a = full_subcategory(c, objects)
    aop = opposite(a)
    pt = _point()
    out = {}
    for x in c.objects:
        elements = {tag(s, h): ("*", s) for s in a.objects for h in c.hom(s, x)}
        right = {}
        for e in elements:
            s, h = split_tag(e)
            for k, (src, tgt) in aop.morphisms.items():
                if src == s:
                    right[(e, k)] = tag(tgt, c.comp(h, k))
        out[x] = Profunctor(pt, aop, elements, {("id_*", e): e for e in elements}, right,
                            name=f"nu({x})")
    return out


def _point():
    from .fincat import terminal
    return terminal()


def nerve_ff(c, objects):
    """Whether postcomposition Hom(X, Y) -> Nat(nu X, nu Y) is bijective for all X, Y.

    Returns (verdict, witness) where the witness is the first failing pair
    with both counts.
    """
    nu = nerve(c, objects)
    for x in c.objects:
        for y in c.objects:
            nats = prof_nats(nu[x], nu[y])
            images = set()
            for f in c.hom(x, y):
                images.add(tuple(sorted(
                    (e, tag(split_tag(e)[0], c.comp(f, split_tag(e)[1]))) for e in nu[x].elements)))
            table = {tuple(sorted(a.map.items())) for a in nats}
            if len(images) != len(c.hom(x, y)) or images != table:
                return False, (x, y, len(c.hom(x, y)), len(nats))
    return True, None


def respects_arities(k, ec, ed, cap=2):
    """(True, None) or (False, F) with F a member of ec sent outside ed."""
    for f in ec.members(cap):
        if not ed.membership(module_apply(k, f)):
            return False, f
    return True, None


# ------------------------------------------------------------------ theories

class Theory:
    def __init__(self, t, arities, flag0=None, flag1=None, name="T"):
        self.t = t
        self.arities = arities
        self.flag0 = flag0 or core_flag(t.source)
        self.flag1 = flag1 or discrete_flag(t.target)
        self.name = name

    @property
    def t0(self):
        return self.t.source

    @property
    def t1(self):
        return self.t.target

    def is_complete(self):
        return is_complete(self.flag0) and is_complete(self.flag1)

    def __repr__(self):
        return f"<Theory {self.name}: {self.t0.name} -> {self.t1.name}>"


def validate_theory(th, cap=2):
    bad = validate_functor(th.t)
    if bad:
        return bad
    if not is_bijective_on_objects(th.t):
        bad.append("t is not bijective on objects")
    if th.arities.base != th.t0:
        bad.append("arities live on the wrong category")
    for name, fl in (("T0", th.flag0), ("T1", th.flag1)):
        bad += [f"{name} flag: {b}" for b in validate_flagged(fl)]
    if not is_complete(th.flag0):
        bad.append("T0 is not complete")
    if bad:
        return bad
    ok, witness = respects_arities(promonad_from_iof(th.t).carrier, th.arities, th.arities, cap)
    if not ok:
        bad.append(f"t^*t_! sends a member with {len(witness)} elements outside the arities")
    return bad


def theory_from_monad(t, ar, cap=2):
    """The Kleisli theory of a monad with arities; raises ArityError with a witness."""
    bad = validate_monad(t)
    if bad:
        raise ValueError("not a monad: " + bad[0])
    carrier = kleisli_promonad(t).carrier
    for f in ar.members(cap):
        if not ar.membership(module_apply(carrier, f)):
            raise ArityError("F.T is not an arity for some arity F", witness=f)
    _, j = kleisli(t)
    return Theory(j, ar, core_flag(t.base), discrete_flag(j.target), name=f"Th({t.name})")


def monad_from_theory(th):
    """t^*t_! as compose(t_!, t^*) with unit and multiplication from the adjunction."""
    t = th.t
    lo, ro = companion(t), conjoint(t)
    carrier = compose_prof(lo, ro)
    unit = adjunction_unit(t)
    sq = compose_prof(carrier, carrier)
    d = t.target
    mapping = {}
    for cls, (p, q) in sq.rep_pair.items():
        a1, b1 = carrier.rep_pair[p]
        a2, b2 = carrier.rep_pair[q]
        c, h1 = split_tag(a1)
        _, k1 = split_tag(b1)
        _, h2 = split_tag(a2)
        # the counit composes the middle conjoint and companion elements
        mapping[cls] = carrier.pair_class[(tag(c, d.comp(h2, k1, h1)), b2)]
    return Promonad(t.source, carrier, unit, ProfMorphism(sq, carrier, mapping),
                    name=f"P({th.name})")


def carrier_to_morphisms(th, p=None):
    """Carrier of monad_from_theory -> morphisms of T1, [h, k] -> k.h."""
    p = p or monad_from_theory(th)
    d = th.t1
    return {cls: d.comp(split_tag(b)[1], split_tag(a)[1])
            for cls, (a, b) in p.carrier.rep_pair.items()}


def models(th, cap):
    """Modules over T1 with fibers <= cap whose restriction along t is an arity."""
    return [g for g in enumerate_modules(th.t1, cap)
            if th.arities.membership(restrict_module(g, th.t))]


# --------------------------------------------------------------------- L^bo

class LboResult:
    def __init__(self, category, functor, unit, status, length):
        self.category = category
        self.functor = functor
        self.unit = unit
        self.status = status
        self.length = length

    def __repr__(self):
        return f"<LboResult {self.status} at length {self.length}: {self.category!r}>"


def _string_id(x, letters):
    return tag("s", x, *letters)


def _reduce(d, letters):
    """Compose neighbours that are composable in D; drop identities."""
    stack = []
    for g in letters:
        if d.is_identity(g):
            continue
        if stack and d.tgt(stack[-1]) == d.src(g):
            h = d.comp(g, stack[-1])
            stack.pop()
            if not d.is_identity(h):
                stack.append(h)
        else:
            stack.append(g)
    return stack


def l_bo(f, bound=8):
    """Left adjoint to the inclusion of bo into eso categories over C.

    Objects are the objects of C; a morphism a -> b is a string of
    non-identity D-morphisms whose images in C compose, reduced so that no
    neighbours are composable in D. Reduced strings are generated by length;
    the first empty length certifies saturation. Raises Unsaturated when a
    reduced string of length bound + 1 exists.
    """
    d, c = f.source, f.target
    if not is_surjective_on_objects(f):
        raise ValueError("functor is not surjective on objects")
    letters = d.nonidentity()
    levels = [[((), x) for x in c.objects]]
    length = 0
    while levels[-1]:
        if length > bound:
            raise Unsaturated(bound)
        nxt = []
        for word, x in levels[-1]:
            end = f.ob(d.tgt(word[-1])) if word else x
            for g in letters:
                if f.ob(d.src(g)) != end:
                    continue
                if word and d.tgt(word[-1]) == d.src(g):
                    continue
                nxt.append((word + (g,), x))
        levels.append(nxt)
        length += 1
    words = [w for level in levels for w in level]
    mors, image = {}, {}
    for word, x in words:
        s = x
        t = f.ob(d.tgt(word[-1])) if word else x
        sid = _string_id(x, word)
        mors[sid] = (s, t)
        image[sid] = c.comp(*[f.mor(g) for g in reversed(word)]) if word else c.id(x)
    ident = {x: _string_id(x, ()) for x in c.objects}
    comp = {}
    for w1, x1 in words:
        t1 = f.ob(d.tgt(w1[-1])) if w1 else x1
        for w2, x2 in words:
            if x2 != t1:
                continue
            red = tuple(_reduce(d, list(w1) + list(w2)))
            comp[(_string_id(x2, w2), _string_id(x1, w1))] = _string_id(x1, red)
    cat = FinCategory(c.objects, mors, ident, comp, name=f"Lbo({d.name})")
    bad = validate_category(cat)
    if bad:
        raise ValueError("string quotient is not a category: " + bad[0])
    functor = FinFunctor(cat, c, {x: x for x in c.objects}, image, name="f~")
    unit = FinFunctor(d, cat, {x: f.ob(x) for x in d.objects},
                      {g: ident[f.ob(d.src(g))] if d.is_identity(g)
                       else _string_id(f.ob(d.src(g)), (g,)) for g in d.morphisms},
                      name="u")
    return LboResult(cat, functor, unit, "Saturated", length - 1)


# ----------------------------------------------------------------- skeleton

def skeleton(c):
    """(S, q, s, psi): the full subcategory on the first object of each iso
    class, the retraction q: C -> S, the inclusion s, and chosen isos
    psi[x]: x -> rep(x)."""
    reps, psi = [], {}
    for cls in iso_classes(c):
        r = cls[0]
        reps.append(r)
        for x in cls:
            psi[x] = next(m for m in c.hom(x, r) if inverse(c, m) is not None)
    sk = full_subcategory(c, reps, name=f"sk({c.name})")
    rep = {x: c.tgt(psi[x]) for x in c.objects}
    q = FinFunctor(c, sk, rep,
                   {f: c.comp(psi[t], f, inverse(c, psi[s])) for f, (s, t) in c.morphisms.items()},
                   name="q")
    s = FinFunctor(sk, c, {x: x for x in reps}, {f: f for f in sk.morphisms}, name="s")
    return sk, q, s, psi


# ----------------------------------------------------------------- goodness

class Completion:
    """Data of the completion: u: T0 -> T0~, the skeleton maps, and L^bo."""

    def __init__(self, lbo, t_tilde, skel, q, s, psi):
        self.lbo = lbo
        self.t_tilde = t_tilde
        self.skel = skel
        self.q = q
        self.s = s
        self.psi = psi

    @property
    def u(self):
        return self.lbo.unit


def completion_data(th, bound=8):
    sk, q, s, psi = skeleton(th.t1)
    qt = compose_functors(q, th.t)
    lbo = l_bo(qt, bound)
    cat = lbo.category
    mor = {}
    for sid in cat.morphisms:
        parts = split_tag(sid)
        word = parts[2:]
        mor[sid] = sk.comp(*[qt.mor(g) for g in reversed(word)]) if word else sk.id(parts[1])
    t_tilde = FinFunctor(cat, sk, {x: x for x in cat.objects}, mor, name="t~")
    return Completion(lbo, t_tilde, sk, q, s, psi)


class GoodnessReport:
    def __init__(self, bullets):
        self.bullets = bullets

    @property
    def good(self):
        return all(ok for _, ok, _ in self.bullets)

    def failing(self):
        return [k for k, (_, ok, _) in enumerate(self.bullets, 1) if not ok]

    def __repr__(self):
        marks = "".join("+" if ok else "-" for _, ok, _ in self.bullets)
        return f"<GoodnessReport {marks}>"


def is_good(th, bound=8, cap=2):
    """The four goodness conditions over the terminal base, each with a witness."""
    comp = completion_data(th, bound)
    u = comp.u
    bullets = []
    eps = adjunction_counit(u)
    ok = is_iso_morphism(eps)
    bullets.append(("u_! u^* = id", ok, eps if ok else
                    f"counit has {len(eps.source)} elements against {len(eps.target)}"))
    bullets.append(("edge profunctors transported", True, "no non-unital morphisms in the base"))
    transported = Transported(th.arities, u)
    push = companion(u)
    bad3 = None
    images = [module_apply(push, f) for f in th.arities.members(cap)]
    for g in images:
        if not th.arities.membership(restrict_module(g, u)):
            bad3 = ("u^* leaves the arities", g)
            break
    if bad3 is None:
        for g in enumerate_modules(u.target, cap):
            h = restrict_module(g, u)
            if th.arities.membership(h) and find_prof_iso(module_apply(push, h), g) is None:
                bad3 = ("square is not a pullback on objects", g)
                break
    if bad3 is None:
        for g1, g2 in itertools.product(images, repeat=2):
            h1, h2 = restrict_module(g1, u), restrict_module(g2, u)
            if len(prof_nats(g1, g2)) != len(prof_nats(h1, h2)):
                bad3 = ("square is not a pullback on morphisms", (g1, g2))
                break
    bullets.append(("pullback of arities", bad3 is None, bad3))
    carrier = promonad_from_iof(comp.t_tilde).carrier
    ok4, w4 = respects_arities(carrier, transported, transported, cap)
    bullets.append(("completed monad respects arities", ok4, w4))
    return GoodnessReport(bullets)


# --------------------------------------------------------------- completion

class CompletedTheory(Theory):
    def __init__(self, t, arities, flag0, flag1, unit, data, name):
        super().__init__(t, arities, flag0, flag1, name=name)
        self.unit = unit
        self.data = data


def complete_theory(th, bound=8, cap=2, force=False):
    """Completion: T0~ = L^bo(q.t) over the skeleton of T1, both flags the core.

    A theory that is already complete is returned unchanged unless force is
    set. Raises ValueError when the theory is not good and Unsaturated when
    L^bo does not saturate within bound.
    """
    if th.is_complete() and not force:
        return th
    report = is_good(th, bound, cap)
    if not report.good:
        raise ValueError(f"theory is not good: bullets {report.failing()} fail")
    comp = completion_data(th, bound)
    cat, sk = comp.lbo.category, comp.skel
    return CompletedTheory(comp.t_tilde, Transported(th.arities, comp.u), core_flag(cat),
                           core_flag(sk), comp.u, comp, name=f"comp({th.name})")


def theories_isomorphic(a, b):
    """An isomorphism T0 -> T0', T1 -> T1' commuting with t, found by search."""
    from .fincat import find_functors
    for f1 in find_functors(a.t1, b.t1, bijective=True):
        if not is_isomorphism(f1):
            continue
        back = {b.t.ob(y): y for y in b.t0.objects}
        om = {x: back[f1.ob(a.t.ob(x))] for x in a.t0.objects}
        for f0 in find_functors(a.t0, b.t0, obmap=om, bijective=True):
            if is_isomorphism(f0) and all(b.t.mor(f0.mor(g)) == f1.mor(a.t.mor(g))
                                          for g in a.t0.morphisms):
                return f0, f1
    return None


class InvarianceReport:
    def __init__(self, left, right, problems):
        self.left = left
        self.right = right
        self.problems = problems

    @property
    def ok(self):
        return not self.problems

    def __repr__(self):
        return (f"<InvarianceReport {len(self.left)} vs {len(self.right)} models, "
                f"{len(self.problems)} problems>")


def models_invariance(th, cap, bound=8):
    """Models of th against models of its completion.

    The comparison functors are restriction along the skeleton inclusion s
    and along the retraction q. Their composites are checked isomorphic to
    identities (G.s.q = G via the chosen isos psi, and q.s = id), and they
    are checked to induce a bijection on isomorphism classes and on
    morphisms.
    """
    comp_th = complete_theory(th, bound, cap, force=True)
    left, right = models(th, cap), models(comp_th, cap)
    data = comp_th.data
    s, q, psi = data.s, data.q, data.psi
    problems = []
    if len(left) != len(right):
        problems.append(f"{len(left)} models against {len(right)} completed models")
    if compose_functors(q, s) != FinFunctor(data.skel, data.skel,
                                             {x: x for x in data.skel.objects},
                                             {f: f for f in data.skel.morphisms}):
        problems.append("q.s is not the identity")
    down = [_restrict_keep(g, s) for g in left]
    for g, g2 in zip(left, down):
        if not comp_th.arities.membership(restrict_module(g2, comp_th.t)):
            problems.append("restricted model is not a model of the completion")
        back = _restrict_keep(g2, q)
        w = ProfMorphism(g, back, {e: g.right[(e, psi[x])] for e, (_, x) in g.elements.items()})
        if not is_iso_morphism(w):
            problems.append("G -> G.s.q is not an isomorphism")
    for g2 in right:
        g = _restrict_keep(g2, q)
        if not th.arities.membership(restrict_module(g, th.t)):
            problems.append("pulled back model is not a model")
        hits = [k for k, h in enumerate(left) if find_prof_iso(g, h) is not None]
        if len(hits) != 1:
            problems.append(f"completed model matches {len(hits)} models")
    for k, g2 in enumerate(down):
        hits = [m for m, h in enumerate(right) if find_prof_iso(g2, h) is not None]
        if len(hits) != 1:
            problems.append(f"model {k} matches {len(hits)} completed models")
    for a, b in itertools.product(range(len(left)), repeat=2):
        if len(prof_nats(left[a], left[b])) != len(prof_nats(down[a], down[b])):
            problems.append(f"hom sets differ for models {a}, {b}")
    return InvarianceReport(left, right, problems)


def _restrict_keep(g, j):
    """G.j keeping the element ids of G when j is injective on objects."""
    c = j.source
    elements = {e: ("*", x) for x in c.objects for e in g.fiber("*", j.ob(x))}
    right = {(e, f): g.right[(e, j.mor(f))] for e, (_, x) in elements.items()
             for f, (s, _) in c.morphisms.items() if s == x}
    if len(elements) != sum(len(g.fiber("*", j.ob(x))) for x in c.objects):
        raise ValueError("restriction along a non-injective functor")
    return Profunctor(g.source, c, elements, {("id_*", e): e for e in elements}, right,
                      name=f"{g.name}.{j.name}")


# ------------------------------------------------------ models vs algebras

class EquivalenceReport:
    """Models of the Kleisli theory against arity algebras of the monad."""

    def __init__(self, models, algebras, to_algebra, to_model, problems):
        self.models = models
        self.algebras = algebras
        self.to_algebra = to_algebra
        self.to_model = to_model
        self.problems = problems

    @property
    def ok(self):
        return not self.problems

    def __repr__(self):
        return (f"<EquivalenceReport {len(self.models)} models, {len(self.algebras)} "
                f"algebras, {len(self.problems)} problems>")


def model_algebra_equivalence(t, ar, cap):
    """Both comparison functors between models(Th(T)) and algebras on arities.

    A model G goes to its restriction with the action read off G; an algebra
    (F, a) goes to F with T1-morphisms acting through a. Both composites are
    checked to be identities on the nose, and the maps are checked to induce
    inverse bijections of isomorphism classes that preserve hom-set sizes.
    """
    from .monad import algebra_to_module, module_to_algebra, promonad_module_algebras
    th = theory_from_monad(t, ar, cap)
    p = kleisli_promonad(t)
    ms = models(th, cap)
    algs = [a for a in promonad_module_algebras(p, cap) if ar.membership(a.module)]
    to_alg = [module_to_algebra(p, g) for g in ms]
    to_mod = [algebra_to_module(p, a) for a in algs]
    problems = []
    for k, (g, a) in enumerate(zip(ms, to_alg)):
        if not ar.membership(a.module):
            problems.append(f"model {k}: underlying module is not an arity")
        back = algebra_to_module(p, a)
        if back.elements != g.elements or back.right != g.right:
            problems.append(f"model {k}: round trip is not the identity")
    for k, (a, g) in enumerate(zip(algs, to_mod)):
        if not ar.membership(restrict_module(g, th.t)):
            problems.append(f"algebra {k}: transported module is not a model")
        back = module_to_algebra(p, g)
        if back.module.right != a.module.right or back.action.map != a.action.map:
            problems.append(f"algebra {k}: round trip is not the identity")
    for k, g in enumerate(ms):
        hits = [m for m, h in enumerate(to_mod) if find_prof_iso(g, h) is not None]
        if len(hits) != 1:
            problems.append(f"model {k} matches {len(hits)} algebras")
    for m, h in enumerate(to_mod):
        hits = [k for k, g in enumerate(ms) if find_prof_iso(g, h) is not None]
        if len(hits) != 1:
            problems.append(f"algebra {m} matches {len(hits)} models")
    return EquivalenceReport(ms, algs, to_alg, to_mod, problems)


# ------------------------------------------------------ indexed theories

def indexed_theory_check(d, arities, cap=2):
    """Problems with reading a lax diagram over [n] as a theory.

    Vertex i is the identity-on-objects functor T0_i -> T1_i with arities
    arities[i]; each edge M_ij restricted to T0_i -/-> T0_j must respect them.
    """
    from .laxdiag import validate_lax
    bad = validate_lax(d)
    if bad:
        return bad
    for i, u in enumerate(d.vertices):
        bad += [f"vertex {i}: {b}" for b in validate_theory(Theory(u, arities[i]), cap)]
    for (i, j), m in sorted(d.edges.items()):
        k = compose_prof(compose_prof(companion(d.vertices[i]), m), conjoint(d.vertices[j]))
        ok, _ = respects_arities(k, arities[i], arities[j], cap)
        if not ok:
            bad.append(f"edge {i}->{j} sends an arity outside the arities")
    return bad
