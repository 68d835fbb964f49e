import itertools

import pytest

from corrcalc.fincat import (
    FinFunctor, concrete_category, coproduct, cyclic_group, discrete, find_functors,
    find_isomorphism, identity_functor, is_complete, product, rename_category,
    simplex_category, tag, terminal, validate_category, walking_iso,
)
from corrcalc.laxdiag import LaxDiagram, Unsaturated, vertex_catalogue
from corrcalc.monad import (
    constant_terminal_monad, find_monads, identity_monad, identity_promonad,
    kleisli_promonad, validate_promonad,
)
from corrcalc.prof import (
    companion, empty_profunctor, enumerate_modules, find_prof_iso, identity_prof,
    module_from_functions, module_functions, restrict_module,
)
from corrcalc.theory import (
    ArityError, Dense, Explicit, Theory, Transported, carrier_to_morphisms, complete_theory,
    indexed_theory_check, is_good, l_bo, model_algebra_equivalence, models,
    models_invariance, monad_from_theory, nerve, nerve_ff, respects_arities,
    theories_isomorphic, theory_from_monad, validate_theory,
)
import oracles

ONE = simplex_category(1)
TWO = simplex_category(2)
Z2 = cyclic_group(2)
PT = terminal()
RETR = concrete_category({"0": 1, "1": 2}, {"s": ("0", "1", (0,)), "r": ("1", "0", (0, 0))},
                         name="retr")


def dense_all(c):
    return Dense(c, c.objects)


def kleisli_theory(c):
    return theory_from_monad(identity_monad(c), dense_all(c))


def monad_corpus():
    """Ten monads with arities on categories with at most three objects."""
    def mon(c, k):
        return find_monads(c)[k]
    even = [m for m in enumerate_modules(Z2, 2)
            if all(len(m.fiber("*", x)) % 2 == 0 for x in Z2.objects)]
    iso = walking_iso()
    return [
        (mon(ONE, 0), dense_all(ONE)),
        (mon(ONE, 1), dense_all(ONE)),
        (mon(ONE, 1), Dense(ONE, ["1"])),
        (mon(TWO, 1), Dense(TWO, ["0", "2"])),
        (mon(TWO, 3), Dense(TWO, ["1", "2"])),
        (mon(Z2, 1), Dense(Z2, ["*"])),
        (mon(cyclic_group(3), 2), Dense(cyclic_group(3), ["*"])),
        (mon(iso, 2), Dense(iso, ["x"])),
        (mon(RETR, 0), Dense(RETR, ["0"])),
        (mon(Z2, 0), Explicit(Z2, even)),
    ]


def good_corpus():
    """Five good theories that are not complete."""
    pz = FinFunctor(PT, Z2, {"*": "*"}, {"id_*": "e"}, name="*->Z/2")
    p12 = product(ONE, Z2)
    inc = FinFunctor(ONE, p12, {x: tag(x, "*") for x in ONE.objects},
                     {f: tag(f, "e") for f in ONE.morphisms}, name="[1]->[1]xZ/2")
    return [kleisli_theory(Z2), kleisli_theory(cyclic_group(3)), Theory(pz, Dense(PT, ["*"])),
            kleisli_theory(p12), Theory(inc, dense_all(ONE))]


# ------------------------------------------------------------------ nerves

class TestNerve:
    @pytest.mark.parametrize("c", [ONE, TWO, Z2, walking_iso(), RETR, discrete(["x", "y"])])
    def test_yoneda_is_fully_faithful(self, c):
        assert nerve_ff(c, c.objects) == (True, None)

    def test_point_of_interval_is_not_dense(self):
        # nu(0) and nu(1) are both one-point sets, Hom(1, 0) is empty
        assert nerve_ff(ONE, ["0"]) == (False, ("1", "0", 0, 1))

    def test_discrete_point_is_not_dense(self):
        ok, witness = nerve_ff(discrete(["x", "y"]), ["x"])
        assert not ok
        assert witness[0] == "y"

    def test_nerve_values(self):
        nu = nerve(TWO, ["0", "1"])
        assert [len(nu[x].elements) for x in TWO.objects] == [1, 2, 2]
        assert not nu["0"].fiber("*", "1")

    def test_terminal_object_is_dense_in_retract(self):
        # 0 is a retract of 1, so Hom(0, -) detects everything
        assert nerve_ff(RETR, ["1"])[0]


# ----------------------------------------------------------------- arities

class TestArities:
    @pytest.mark.parametrize("c", [ONE, TWO, RETR, Z2])
    def test_dense_membership_matches_oracle(self, c):
        raw = oracles.brute_modules(c, 2)
        for r in range(len(c.objects) + 1):
            for objs in itertools.combinations(c.objects, r):
                spec = Dense(c, objs)
                for sizes, fun in raw:
                    f = module_from_functions(c, sizes, fun)
                    assert spec.membership(f) == oracles.brute_ran_member(c, objs, sizes, fun)

    def test_dense_all_is_everything(self):
        assert len(dense_all(TWO).members(2)) == len(enumerate_modules(TWO, 2))

    def test_dense_empty_is_terminal_only(self):
        # Ran from the empty category is the constant one-point module
        members = Dense(ONE, []).members(3)
        assert [len(m.elements) for m in members] == [2]

    def test_explicit_is_closed_under_isomorphism(self):
        f = enumerate_modules(Z2, 2)[-1]
        spec = Explicit(Z2, [f])
        sizes, fun = module_functions(f)
        swapped = {m: tuple(1 - fun[m][1 - k] for k in range(2)) for m in fun} \
            if sizes["*"] == 2 else fun
        assert spec.membership(module_from_functions(Z2, sizes, swapped))
        others = [g for g in enumerate_modules(Z2, 2) if find_prof_iso(f, g) is None]
        assert not any(spec.membership(g) for g in others)

    def test_transported_along_identity(self):
        spec = Dense(ONE, ["1"])
        tr = Transported(spec, identity_functor(ONE))
        for g in enumerate_modules(ONE, 2):
            assert tr.membership(g) == spec.membership(g)


class TestRespects:
    def test_identity_profunctor(self):
        for spec in (dense_all(TWO), Dense(TWO, ["2"]), Dense(ONE, ["1"])):
            assert respects_arities(identity_prof(spec.base), spec, spec) == (True, None)

    def test_companion_of_equivalence_with_transported_spec(self):
        iso = walking_iso()
        swap = next(f for f in find_functors(iso, iso, bijective=True)
                    if f.ob("x") == "y")
        spec = Dense(iso, ["x"])
        assert respects_arities(companion(swap), spec, Transported(spec, swap))[0]

    def test_empty_profunctor_leaves_nonempty_arities(self):
        nonempty = [m for m in enumerate_modules(ONE, 2) if m.elements]
        ed = Explicit(ONE, nonempty)
        ok, witness = respects_arities(empty_profunctor(ONE, ONE), dense_all(ONE), ed)
        assert not ok
        assert witness is not None


# ---------------------------------------------------------------- theories

class TestTheoryFromMonad:
    def test_identity_monad_gives_isomorphic_ends(self):
        for c in (ONE, TWO, Z2):
            th = kleisli_theory(c)
            assert find_isomorphism(th.t0, th.t1) is not None
            assert not validate_theory(th)

    def test_arity_violation_is_rejected_with_witness(self):
        t = constant_terminal_monad(ONE)
        bad = next(m for m in enumerate_modules(ONE, 2)
                   if len(m.fiber("*", "0")) == 1 and len(m.fiber("*", "1")) == 2)
        with pytest.raises(ArityError) as info:
            theory_from_monad(t, Explicit(ONE, [bad]))
        assert find_prof_iso(info.value.witness, bad) is not None

    def test_flags(self):
        th = kleisli_theory(Z2)
        assert is_complete(th.flag0)
        assert not is_complete(th.flag1)
        assert not th.is_complete()

    @pytest.mark.parametrize("k", range(10))
    def test_monad_roundtrip(self, k):
        t, ar = monad_corpus()[k]
        th = theory_from_monad(t, ar)
        assert not validate_theory(th)
        p = monad_from_theory(th)
        assert not validate_promonad(p)
        assert find_prof_iso(p.carrier, kleisli_promonad(t).carrier) is not None

    @pytest.mark.parametrize("k", range(10))
    def test_carrier_counts_kleisli_homs(self, k):
        t, ar = monad_corpus()[k]
        th = theory_from_monad(t, ar)
        p = monad_from_theory(th)
        c = t.base
        for x, y in itertools.product(c.objects, repeat=2):
            assert len(p.carrier.fiber(x, y)) == len(c.hom(x, t.endo.ob(y)))
        table = carrier_to_morphisms(th, p)
        assert sorted(table.values()) == sorted(th.t1.morphisms)
        for cls, m in table.items():
            assert th.t1.morphisms[m] == p.carrier.elements[cls]

    def test_identity_theory_gives_identity_promonad(self):
        th = Theory(identity_functor(TWO), dense_all(TWO))
        p = monad_from_theory(th)
        assert find_prof_iso(p.carrier, identity_promonad(TWO).carrier) is not None


class TestModels:
    def test_identity_theory_models_are_modules(self):
        th = Theory(identity_functor(ONE), dense_all(ONE))
        assert len(models(th, 3)) == len(enumerate_modules(ONE, 3)) == 18

    def test_empty_explicit_has_no_models(self):
        th = Theory(identity_functor(Z2), Explicit(Z2, []))
        assert models(th, 3) == []

    @pytest.mark.parametrize("k", [0, 1, 2, 5, 7, 8])
    def test_model_count_matches_oracle(self, k):
        t, ar = monad_corpus()[k]
        th = theory_from_monad(t, ar)
        t1 = th.t1
        keep = []
        for sizes, fun in oracles.brute_modules(t1, 2):
            f0 = {m: fun[th.t.mor(m)] for m in th.t0.morphisms}
            if ar.membership(module_from_functions(th.t0, sizes, f0)):
                keep.append((sizes, fun))
        assert len(models(th, 2)) == oracles.brute_module_classes(t1, keep)

    @pytest.mark.parametrize("k", range(10))
    def test_models_are_algebras(self, k):
        t, ar = monad_corpus()[k]
        r = model_algebra_equivalence(t, ar, 2)
        assert r.ok, r.problems
        assert len(r.models) == len(r.algebras)

    def test_frozen_counts_at_cap_three(self):
        # checked against brute_module_classes when first computed
        counts = [len(model_algebra_equivalence(t, ar, 3).models)
                  for t, ar in monad_corpus()[:3]]
        assert counts == [18, 4, 4]


# -------------------------------------------------------------------- L^bo

def _over_point(c):
    return FinFunctor(c, PT, {x: "*" for x in c.objects}, {f: "id_*" for f in c.morphisms})


def lbo_corpus():
    """Functors surjective on objects, with their expected L^bo sizes."""
    out = []
    d = discrete(["a", "b"])
    out.append((FinFunctor(d, ONE, {"a": "0", "b": "1"}, {"id_a": "id_0", "id_b": "id_1"}),
                2, 2))
    out.append((_over_point(d), 1, 1))
    dd = coproduct([ONE, ONE])
    obs = {tag(0, "0"): "0", tag(0, "1"): "1", tag(1, "0"): "1", tag(1, "1"): "2"}
    mm = {}
    for f, (s, t) in dd.morphisms.items():
        mm[f] = TWO.hom(obs[s], obs[t])[0]
    out.append((FinFunctor(dd, TWO, obs, mm), 3, 6))
    out.append((identity_functor(Z2), 1, 2))
    out.append((identity_functor(ONE), 2, 3))
    return out


class TestLbo:
    @pytest.mark.parametrize("k", range(5))
    def test_sizes(self, k):
        f, n_obj, n_mor = lbo_corpus()[k]
        r = l_bo(f)
        assert r.status == "Saturated"
        assert (len(r.category.objects), len(r.category.morphisms)) == (n_obj, n_mor)
        assert not validate_category(r.category)

    def test_bijective_input_is_unchanged(self):
        for c in (ONE, TWO, Z2, RETR):
            r = l_bo(identity_functor(c))
            assert find_isomorphism(r.category, c) is not None

    def test_discrete_over_interval_is_discrete(self):
        r = l_bo(lbo_corpus()[0][0])
        assert all(r.category.is_identity(m) for m in r.category.morphisms)

    def test_walking_iso_over_point_is_unsaturated(self):
        with pytest.raises(Unsaturated) as info:
            l_bo(_over_point(walking_iso()))
        assert info.value.bound == 8

    def test_two_arrows_over_point_is_unsaturated(self):
        # strings alternate freely, so every length occurs
        with pytest.raises(Unsaturated):
            l_bo(_over_point(coproduct([ONE, ONE])), bound=5)

    def test_not_surjective(self):
        f = FinFunctor(PT, ONE, {"*": "0"}, {"id_*": "id_0"})
        with pytest.raises(ValueError):
            l_bo(f)

    @pytest.mark.parametrize("k", range(5))
    def test_universal_property(self, k):
        f, _, _ = lbo_corpus()[k]
        r = l_bo(f)
        c = f.target
        # competitors: identity-on-objects categories over C with at most 3 objects
        competitors = [identity_functor(c), r.functor]
        for cand in (ONE, TWO, Z2, discrete(["0", "1"]), walking_iso(), PT, RETR,
                     discrete(["0", "1", "2"])):
            if len(cand.objects) == len(c.objects):
                competitors += find_functors(cand, c, bijective=True)
        for p in competitors:
            e = p.source
            left = oracles.brute_functors_over(r.category, e, p, r.functor)
            right = oracles.brute_functors_over(f.source, e, p, f)
            assert left == right
            # precomposition with the unit is the bijection
            hs = [h for h in find_functors(r.category, e)
                  if all(p.mor(h.mor(m)) == r.functor.mor(m) for m in r.category.morphisms)]
            images = {tuple(sorted((m, h.mor(r.unit.mor(m))) for m in f.source.morphisms))
                      for h in hs}
            assert len(images) == len(hs) == right


# --------------------------------------------------------------- goodness

def _bullet_one_failure():
    iso = walking_iso()
    d = discrete(["x", "y"])
    j = FinFunctor(d, iso, {"x": "x", "y": "y"}, {"id_x": "id_x", "id_y": "id_y"})
    return Theory(j, dense_all(d))


class TestGood:
    def test_complete_theory_is_good(self):
        th = kleisli_theory(TWO)
        assert th.is_complete()
        assert is_good(th).good

    def test_identity_theory_is_good(self):
        for c in (ONE, Z2, RETR):
            assert is_good(Theory(identity_functor(c), dense_all(c))).good

    def test_bullet_one_failure_is_pinpointed(self):
        r = is_good(_bullet_one_failure())
        assert 1 in r.failing()
        assert 2 not in r.failing()
        name, ok, witness = r.bullets[0]
        assert not ok and isinstance(witness, str)

    @pytest.mark.parametrize("k", range(5))
    def test_corpus_is_good(self, k):
        th = good_corpus()[k]
        assert not th.is_complete()
        assert not validate_theory(th, 3)
        assert is_good(th).good

    def test_unsaturated_propagates(self):
        iso = walking_iso()
        th = Theory(identity_functor(iso), dense_all(iso))
        with pytest.raises(Unsaturated):
            is_good(th)


# -------------------------------------------------------------- completion

class TestCompletion:
    def test_complete_theory_returned_unchanged(self):
        th = kleisli_theory(ONE)
        assert complete_theory(th) is th

    def test_not_good_is_rejected(self):
        with pytest.raises(ValueError):
            complete_theory(_bullet_one_failure())

    @pytest.mark.parametrize("k", range(5))
    def test_completion(self, k):
        th = good_corpus()[k]
        ct = complete_theory(th)
        assert ct.is_complete()
        assert not validate_theory(ct)
        assert ct.data.lbo.status == "Saturated"
        assert is_good(ct).good
        again = complete_theory(ct, force=True)
        assert theories_isomorphic(ct, again) is not None

    def test_identity_theory_unchanged_up_to_iso(self):
        th = Theory(identity_functor(Z2), dense_all(Z2))
        ct = complete_theory(th)
        assert find_isomorphism(ct.t0, th.t0) and find_isomorphism(ct.t1, th.t1)

    def test_relabelled_theories_are_isomorphic(self):
        th = kleisli_theory(TWO)
        ren = {x: "n" + x for x in TWO.objects}
        t0 = rename_category(th.t0, ren, {m: "a" + m for m in th.t0.morphisms})
        t1 = rename_category(th.t1, ren, {m: "b" + m for m in th.t1.morphisms})
        t = FinFunctor(t0, t1, {ren[x]: ren[th.t.ob(x)] for x in th.t0.objects},
                       {"a" + m: "b" + th.t.mor(m) for m in th.t0.morphisms})
        assert theories_isomorphic(th, Theory(t, dense_all(t0))) is not None
        assert theories_isomorphic(th, kleisli_theory(RETR)) is None


class TestInvariance:
    @pytest.mark.parametrize("k", range(5))
    @pytest.mark.parametrize("cap", [2, 3])
    def test_equivalence(self, k, cap):
        r = models_invariance(good_corpus()[k], cap)
        assert r.ok, r.problems
        assert len(r.left) == len(r.right) > 0

    def test_identity_theory(self):
        r = models_invariance(Theory(identity_functor(ONE), dense_all(ONE)), 3)
        assert r.ok and len(r.left) == 18

    @pytest.mark.parametrize("k", [0, 3])
    def test_cap_filtration(self, k):
        th = good_corpus()[k]
        small, big = models_invariance(th, 2), models_invariance(th, 3)
        for side in ("left", "right"):
            for g in getattr(small, side):
                hits = [h for h in getattr(big, side) if find_prof_iso(g, h) is not None]
                assert len(hits) == 1


class TestIndexed:
    def test_length_one_diagram_of_theories(self):
        u = next(v for v in vertex_catalogue() if v.name == "disc->[1]")
        m = identity_prof(ONE)
        d = LaxDiagram([u, u], {(0, 1): m}, {})
        ar = dense_all(u.source)
        assert indexed_theory_check(d, [ar, ar]) == []

    def test_edge_violating_arities(self):
        u = identity_functor(ONE)
        nonempty = Explicit(ONE, [m for m in enumerate_modules(ONE, 2) if m.elements])
        d = LaxDiagram([u, u], {(0, 1): empty_profunctor(ONE, ONE)}, {})
        bad = indexed_theory_check(d, [nonempty, nonempty])
        assert bad and "edge 0->1" in bad[0]


def test_restriction_along_bo_keeps_sizes():
    th = kleisli_theory(TWO)
    for g in models(th, 2):
        assert len(restrict_module(g, th.t).elements) == len(g.elements)
