import itertools
import random

import pytest

from corrcalc.fincat import (
    FinFunctor, coproduct, cyclic_group, discrete, identity_functor, simplex_category,
    terminal, validate_category, walking_iso,
)
from corrcalc.laxdiag import (
    LaxCocone, LaxDiagram, Unsaturated, WrrObject, colimit_check, collapse_fibers,
    cocone_to_module, decode_lax, diagram_roundtrip, diagrams, edge_profunctors,
    encode_lax, fiber_category, lax_cocones, modules_over_total, module_to_cocone,
    random_diagram, unital_roundtrip, unital_wrr, validate_cocone, validate_lax,
    validate_wrr, vertex_catalogue, wrr_roundtrip,
)
from corrcalc.monad import (
    constant_terminal_monad, kleisli, kleisli_promonad, promonad_module_algebras,
)
from corrcalc.prof import (
    ProfMorphism, collage, compose_prof, empty_profunctor, enumerate_modules,
    identity_prof, random_profunctor,
)
import oracles

ID = {u.target.name: u for u in vertex_catalogue() if u.name == "id"}
ONE = ID["*"]


def _plain(pt, els):
    from corrcalc.prof import Profunctor
    return Profunctor(pt, pt, els, {("id_*", e): e for e in els},
                      {(e, "id_*"): e for e in els})


def length_one(u0, u1, m):
    return LaxDiagram([u0, u1], {(0, 1): m}, {})


class TestDiagrams:
    def test_catalogue_is_valid(self):
        for u in vertex_catalogue():
            assert not validate_lax(LaxDiagram([u], {}, {}))
            assert len(u.target.objects) <= 2 and len(u.target.morphisms) <= 5

    def test_missing_edge_detected(self):
        d = LaxDiagram([ONE, ONE], {}, {})
        assert any("missing" in b for b in validate_lax(d))

    def test_bad_cell_detected(self):
        d = random_diagram(random.Random(2), n=2)
        assert not validate_lax(d)
        cell = d.cells[(0, 1, 2)]
        if cell.source.elements:
            broken = ProfMorphism(cell.source, cell.target, {k: "nope" for k in cell.map})
            d2 = LaxDiagram(d.vertices, d.edges, {(0, 1, 2): broken})
            assert validate_lax(d2)

    def test_associativity_checked_for_length_three(self):
        # four points, every edge a two-element set, cells chosen so that
        # associativity fails
        m = _plain(terminal(), {"a": ("*", "*"), "b": ("*", "*")})
        edges = {k: m for k in itertools.combinations(range(4), 2)}
        src = compose_prof(m, m)

        def cell(fn):
            return ProfMorphism(src, m, {cls: fn(*src.rep_pair[cls]) for cls in src.elements})

        first = cell(lambda x, y: x)
        second = cell(lambda x, y: y)
        good = {t: first for t in itertools.combinations(range(4), 3)}
        assert not validate_lax(LaxDiagram([ONE] * 4, edges, good))
        bad = dict(good)
        bad[(0, 1, 3)] = second
        assert any("associativity" in b for b in validate_lax(LaxDiagram([ONE] * 4, edges, bad)))


class TestWrr:
    def test_identity_over_base_is_valid(self):
        coll = collage(random_profunctor(ID["[1]"].target, ID["Z/2"].target, random.Random(1)))
        assert not validate_wrr(unital_wrr(coll.projection))

    def test_missing_cross_arrows_is_invalid(self):
        coll = collage(identity_prof(simplex_category(1)))
        e = coll.category
        idm = set(coll.projection.target.identity.values())
        fib = [f for f in e.morphisms if coll.projection.mor(f) in idm]
        from corrcalc.fincat import subcategory, inclusion
        d = subcategory(e, fib)
        h = inclusion(d, e)
        bad = validate_wrr(WrrObject(h, coll.projection))
        assert any("morphisms over" in b for b in bad)

    def test_encode_output_is_valid(self):
        rng = random.Random(4)
        for _ in range(30):
            w = encode_lax(random_diagram(rng))
            assert not validate_category(w.h.target)
            assert not validate_category(w.h.source)
            assert not validate_wrr(w)

    def test_encode_associativity_of_cross_composition(self):
        # the total category's composition is associative, which includes the
        # cross composites built from the cells
        rng = random.Random(8)
        for _ in range(20):
            d = random_diagram(rng, n=2)
            assert not validate_category(encode_lax(d).h.target)


class TestEncodeDecode:
    def test_length_zero_is_the_vertex(self):
        _, j = kleisli(constant_terminal_monad(simplex_category(1)))
        d = LaxDiagram([j], {}, {})
        d2 = decode_lax(encode_lax(d))
        assert len(d2.dfiber(0).morphisms) == len(j.source.morphisms)
        assert len(d2.fiber(0).morphisms) == len(j.target.morphisms)
        assert not diagram_roundtrip(d)

    def test_product_projection_gives_identities(self):
        c = simplex_category(1)
        base = simplex_category(2)
        from corrcalc.fincat import product
        e = product(c, base)
        p = FinFunctor(e, base, {o: o[1:-1].split(",")[1] for o in e.objects},
                       {f: _second(f) for f in e.morphisms})
        d, bad = unital_roundtrip(p)
        assert not bad
        for (i, j), m in d.edges.items():
            assert len(m) == 3
            els, left, right = oracles.untag_prof(m, 0)
            # each edge is the hom profunctor of [1]: one element per arrow
            assert sorted(b for _, b in els.values()) == ["0", "1", "1"]

    def test_collage_reads_back_the_profunctor(self):
        rng = random.Random(5)
        for _ in range(20):
            c = rng.choice([ID["[1]"].target, ID["Z/2"].target, ID["*"].target])
            m = random_profunctor(c, rng.choice([ID["discrete"].target, c]), rng)
            coll = collage(m)
            d = decode_lax(unital_wrr(coll.projection))
            els, left, right = oracles.untag_prof(d.edges[(0, 1)], 1)
            assert els == m.elements
            assert left == m.left and right == m.right

    def test_two_points_with_empty_edge(self):
        a, b = ID["[1]"], ID["Z/2"]
        d = length_one(a, b, empty_profunctor(a.target, b.target))
        e = encode_lax(d).h.target
        assert len(e.objects) == 3
        assert len(e.morphisms) == len(a.target.morphisms) + len(b.target.morphisms)

    def test_roundtrip_random(self):
        rng = random.Random(11)
        for _ in range(60):
            d = random_diagram(rng)
            assert not diagram_roundtrip(d)
            assert not wrr_roundtrip(encode_lax(d))

    def test_roundtrip_against_relabelling_oracle(self):
        rng = random.Random(12)
        for _ in range(30):
            d = random_diagram(rng)
            d2 = decode_lax(encode_lax(d))
            for k, m in d.edges.items():
                els, left, right = oracles.untag_prof(d2.edges[k], 1)
                # cross ids are (i,j,e); strip the two index parts
                els2 = {}
                for e, (a, b) in d2.edges[k].elements.items():
                    els2[e[1:-1].split(",", 2)[2]] = (a[1:-1].split(",", 1)[1],
                                                      b[1:-1].split(",", 1)[1])
                assert els2 == m.elements
            for t in d.cells:
                a, b = d.cells[t], d2.cells[t]
                assert len(a.source) == len(b.source)

    def test_unital_examples(self):
        base = simplex_category(3)
        d, bad = unital_roundtrip(FinFunctor(base, base, {x: x for x in base.objects},
                                             {f: f for f in base.morphisms}))
        assert not bad
        assert all(len(d.fiber(i).objects) == 1 for i in range(4))
        assert all(len(m) == 1 for m in d.edges.values())
        disc = discrete(["0", "1", "2"])
        p = FinFunctor(disc, simplex_category(2), {x: x for x in disc.objects},
                       {f: f for f in disc.morphisms})
        d, bad = unital_roundtrip(p)
        assert not bad
        assert all(len(m) == 0 for m in d.edges.values())

    def test_unital_roundtrip_random(self):
        rng = random.Random(13)
        for _ in range(30):
            d = random_diagram(rng, catalogue=list(ID.values()))
            w = encode_lax(d)
            d2, bad = unital_roundtrip(w.p)
            assert not bad


def _second(f):
    from corrcalc.fincat import split_tag
    return split_tag(f)[1]


class TestCocones:
    def test_single_vertex_kleisli_matches_algebras(self):
        t = constant_terminal_monad(simplex_category(1))
        _, j = kleisli(t)
        d = LaxDiagram([j], {}, {})
        algs = promonad_module_algebras(kleisli_promonad(t), 3)
        assert len(lax_cocones(d, 3)) == len(algs)
        assert colimit_check(d, 3).ok

    def test_empty_edges_give_tuples(self):
        a, b = ID["[1]"], ID["Z/2"]
        d = length_one(a, b, empty_profunctor(a.target, b.target))
        na = len(enumerate_modules(a.target, 2))
        nb = len(enumerate_modules(b.target, 2))
        assert len(lax_cocones(d, 2)) == na * nb
        total = coproduct([a.target, b.target])
        assert len(enumerate_modules(total, 2)) == na * nb
        assert colimit_check(d, 2).ok

    @pytest.mark.parametrize("seed", range(4))
    def test_triples_match_collage_modules(self, seed):
        rng = random.Random(seed)
        c = rng.choice([ID["*"].target, ID["Z/2"].target])
        dd = rng.choice([ID["*"].target, ID["[1]"].target])
        m = random_profunctor(c, dd, rng, max_elements=3)
        d = length_one(identity_functor(c), identity_functor(dd), m)
        assert len(lax_cocones(d, 3)) == len(enumerate_modules(collage(m).category, 3))

    def test_point_to_point_counts(self):
        # one element: modules over [1]; no elements: pairs of sets
        d1 = length_one(ONE, ONE, _plain(terminal(), {"e": ("*", "*")}))
        d0 = length_one(ONE, ONE, _plain(terminal(), {}))
        assert len(lax_cocones(d1, 3)) == 18
        assert len(lax_cocones(d0, 3)) == 16

    def test_roundtrip_witnesses(self):
        rng = random.Random(6)
        for _ in range(10):
            d = random_diagram(rng, n=rng.randint(0, 2), max_elements=2,
                               catalogue=[ONE, ID["Z/2"]])
            for c in lax_cocones(d, 2)[:15]:
                assert not validate_cocone(c)
                g = cocone_to_module(c)
                c2 = module_to_cocone(d, g)
                assert not validate_cocone(c2)

    def test_broken_cocycle_detected(self):
        m = _plain(terminal(), {"a": ("*", "*"), "b": ("*", "*")})
        src = compose_prof(m, m)
        cell = ProfMorphism(src, m, {cls: "a" for cls in src.elements})
        d = LaxDiagram([ONE] * 3, {(0, 1): m, (1, 2): m, (0, 2): m}, {(0, 1, 2): cell})
        f = _plain_module(2)
        acts = {}
        for k in [(0, 1), (1, 2), (0, 2)]:
            s = compose_prof(f, m)
            acts[k] = ProfMorphism(s, f, {cls: s.rep_pair[cls][0] for cls in s.elements})
        acts[(0, 2)] = ProfMorphism(acts[(0, 2)].source, f,
                                    {cls: "(*,1)" for cls in acts[(0, 2)].source.elements})
        bad = validate_cocone(LaxCocone(d, [f, f, f], acts))
        assert any("cocycle" in b for b in bad)


def _plain_module(k):
    from corrcalc.prof import module_from_functions
    return module_from_functions(terminal(), {"*": k}, {"id_*": tuple(range(k))})


class TestColimit:
    @pytest.mark.parametrize("seed", range(6))
    def test_length_one(self, seed):
        rng = random.Random(seed)
        cat = [ONE, ID["Z/2"], ID["[1]"], ID["Z/3"], ID["codiscrete"]]
        d = random_diagram(rng, n=1, max_elements=2, catalogue=cat)
        if len(encode_lax(d).h.target.objects) > 3:
            d = random_diagram(rng, n=1, max_elements=2, catalogue=[ONE, ID["Z/2"]])
        r = colimit_check(d, 2)
        assert r.ok, r.problems[:3]
        assert len(r.cocones) == len(r.modules) > 0

    def test_length_two(self):
        rng = random.Random(21)
        d = random_diagram(rng, n=2, max_elements=2, catalogue=[ID["Z/2"]])
        r = colimit_check(d, 2)
        assert r.ok, r.problems[:3]

    def test_non_unital_vertex(self):
        d = length_one(vertex_catalogue()[-2], ONE,
                       random_profunctor(ID["Z/2"].target, terminal(), random.Random(3)))
        assert colimit_check(d, 2).ok

    def test_unital_matches_total_modules(self):
        rng = random.Random(9)
        d = random_diagram(rng, n=1, max_elements=2, catalogue=[ONE, ID["Z/2"]])
        assert len(lax_cocones(d, 2)) == len(modules_over_total(d, 2))

    def test_cap_two_to_three_extends(self):
        d = length_one(ONE, ID["Z/2"], random_profunctor(terminal(), ID["Z/2"].target,
                                                         random.Random(1), 2))
        r2, r3 = colimit_check(d, 2), colimit_check(d, 3)
        assert r2.ok and r3.ok
        assert len(r2.cocones) <= len(r3.cocones)


class TestCollapse:
    def test_discrete_fibers_give_e(self):
        rng = random.Random(3)
        for _ in range(10):
            d = random_diagram(rng, catalogue=[u for u in vertex_catalogue()
                                               if len(u.source.morphisms) == len(u.source.objects)])
            w = encode_lax(d)
            r = collapse_fibers(w)
            assert r.status == "Saturated"
            assert len(r.category.objects) == len(w.h.target.objects)
            assert len(r.category.morphisms) == len(w.h.target.morphisms)

    def test_groupoid_fibers_collapse_to_components(self):
        cats = [identity_functor(c) for c in (walking_iso(), cyclic_group(2), cyclic_group(3),
                                             discrete(["0", "1"]), terminal())]
        rng = random.Random(4)
        for _ in range(15):
            n = rng.randint(0, 2)
            verts = [rng.choice(cats) for _ in range(n + 1)]
            d = LaxDiagram(verts, {(i, j): empty_profunctor(verts[i].target, verts[j].target)
                                   for i, j in itertools.combinations(range(n + 1), 2)},
                           {t: None for t in []})
            d.cells = {t: ProfMorphism(compose_prof(d.edges[t[:2]], d.edges[t[1:]]),
                                       d.edges[(t[0], t[2])], {})
                       for t in itertools.combinations(range(n + 1), 3)}
            w = encode_lax(d)
            r = collapse_fibers(w)
            for i in range(n + 1):
                fib = fiber_category(w.h.target, w.p, i)
                expected = oracles.brute_components(fib.objects, fib.morphisms.values())
                got = [x for x in r.category.objects if r.projection.ob(x) == str(i)]
                assert len(got) == expected

    def test_non_invertible_image_rejected(self):
        d = decode_lax(encode_lax(LaxDiagram([ID["[1]"]], {}, {})))
        with pytest.raises(ValueError):
            collapse_fibers(encode_lax(d))

    def test_groupoid_vertex_contracts_to_a_point(self):
        # fully contracted when D = E is a connected groupoid; untouched when
        # D is discrete
        u = FinFunctor(discrete(["0", "1"]), walking_iso(), {"0": "x", "1": "y"},
                       {"id_0": "id_x", "id_1": "id_y"})
        iso = identity_functor(walking_iso())
        z2 = identity_functor(cyclic_group(2))
        for v in (iso, z2):
            w = encode_lax(LaxDiagram([v], {}, {}))
            r = collapse_fibers(w)
            assert len(r.category.objects) == 1
            assert len(r.category.morphisms) == 1
        w = encode_lax(LaxDiagram([u], {}, {}))
        r = collapse_fibers(w)
        assert len(r.category.objects) == 2

    def test_small_bound_is_unsaturated(self):
        w = encode_lax(LaxDiagram([ID["Z/2"]], {}, {}))
        with pytest.raises(Unsaturated):
            collapse_fibers(w, bound=2)


class TestGenerators:
    def test_edge_profunctor_counts(self):
        # profunctors * -/-> * are sets
        assert len(edge_profunctors(terminal(), terminal(), 4)) == 5
        # * -/-> [1] are modules over [1]
        assert len(edge_profunctors(terminal(), simplex_category(1), 3)) == \
            len([f for f in enumerate_modules(simplex_category(1), 3) if len(f) <= 3])

    def test_diagram_generation_is_coherent(self):
        for d in diagrams([ONE, ONE, ONE], 1):
            assert not validate_lax(d)
