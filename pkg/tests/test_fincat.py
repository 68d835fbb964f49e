import pytest
from hypothesis import given, settings, strategies as st

from corrcalc import fincat
from corrcalc.fincat import (
    FinCategory, FinFunctor, StructuralError, core, discrete, find_functors,
    free_cocart_fibration, has_cocartesian_lifts, nat_set, simplex_category, terminal,
    validate_category, walking_iso,
)
import oracles
from strategies import small_categories


def point_at(c, x):
    t = terminal()
    return FinFunctor(t, c, {"*": x}, {"id_*": c.id(x)})


class TestValidate:
    def test_terminal_valid(self):
        assert validate_category(terminal()) == []

    def test_poset_two(self):
        c = simplex_category(2)
        assert validate_category(c) == []
        assert len(c.objects) == 3 and len(c.morphisms) == 6

    def test_redirected_composite_is_typing_violation(self):
        c = simplex_category(2)
        comp = dict(c.compose)
        comp[("1_2", "0_1")] = "id_0"
        bad = validate_category(FinCategory(c.objects, c.morphisms, c.identity, comp))
        assert any("typing" in b for b in bad)

    def test_missing_composite_reported(self):
        c = simplex_category(2)
        comp = dict(c.compose)
        del comp[("1_2", "0_1")]
        bad = validate_category(FinCategory(c.objects, c.morphisms, c.identity, comp))
        assert any("missing" in b for b in bad)

    def test_unknown_reference_is_structural(self):
        c = simplex_category(1)
        comp = dict(c.compose)
        comp[("0_1", "id_0")] = "nope"
        with pytest.raises(StructuralError):
            validate_category(FinCategory(c.objects, c.morphisms, c.identity, comp))

    def test_associativity_violation(self):
        # monoid {e, a, b} with a.b = b, b.a = a, a.a = e: not associative
        els = ["e", "a", "b"]
        table = {("a", "a"): "e", ("a", "b"): "b", ("b", "a"): "a", ("b", "b"): "b"}

        def mult(x, y):
            if x == "e":
                return y
            if y == "e":
                return x
            return table[(x, y)]

        c = fincat.monoid_category(els, mult, "e")
        assert any("associativity" in b for b in validate_category(c))

    @given(small_categories())
    @settings(max_examples=40, deadline=None)
    def test_builders_produce_categories(self, c):
        assert validate_category(c) == []


class TestCore:
    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_core_of_poset_is_discrete(self, n):
        k = core(simplex_category(n))
        assert len(k.objects) == n + 1 and len(k.morphisms) == n + 1

    def test_core_of_iso(self):
        assert core(walking_iso()) == walking_iso()

    def test_core_of_group(self):
        g = fincat.cyclic_group(3)
        assert core(g) == g

    @given(small_categories())
    @settings(max_examples=40, deadline=None)
    def test_core_idempotent_and_against_oracle(self, c):
        k = core(c)
        assert core(k) == k
        assert set(k.morphisms) == {f for f in c.morphisms if oracles.brute_is_iso(c, f)}
        assert all(c.id(x) in k.morphisms for x in c.objects)


class TestNat:
    def test_identity_on_interval(self):
        f = fincat.identity_functor(simplex_category(1))
        assert len(nat_set(f, f)) == 1

    def test_iso_inclusions(self):
        i = walking_iso()
        assert len(nat_set(point_at(i, "x"), point_at(i, "y"))) == 1

    def test_discrete_inclusions(self):
        d = discrete(["a", "b"])
        assert nat_set(point_at(d, "a"), point_at(d, "b")) == []

    def test_non_parallel_rejected(self):
        with pytest.raises(ValueError):
            nat_set(point_at(walking_iso(), "x"), point_at(simplex_category(1), "0"))

    def test_components_valid(self):
        c = simplex_category(2)
        fs = find_functors(simplex_category(1), c)
        for f in fs:
            for g in fs:
                for a in nat_set(f, g):
                    assert fincat.validate_nat(a) == []

    @given(small_categories(3), small_categories(3), st.data())
    @settings(max_examples=30, deadline=None)
    def test_count_matches_product_filter(self, c, d, data):
        fs = find_functors(c, d, limit=12)
        if not fs:
            return
        f = data.draw(st.sampled_from(fs))
        g = data.draw(st.sampled_from(fs))
        assert len(nat_set(f, g)) == oracles.brute_nat_count(f, g)


class TestFunctors:
    @pytest.mark.parametrize("c,d", [
        (simplex_category(1), simplex_category(2)),
        (simplex_category(2), simplex_category(2)),
        (walking_iso(), simplex_category(1)),
        (fincat.cyclic_group(2), fincat.cyclic_group(2)),
        (fincat.cyclic_group(3), walking_iso()),
    ])
    def test_counts_match_oracle(self, c, d):
        fs = find_functors(c, d)
        assert len(fs) == oracles.brute_functor_count(c, d)
        assert all(fincat.validate_functor(f) == [] for f in fs)

    def test_known_counts(self):
        # monotone maps [2] -> [2]
        assert len(find_functors(simplex_category(2), simplex_category(2))) == 10
        assert len(find_functors(fincat.cyclic_group(2), fincat.cyclic_group(2))) == 2

    def test_isomorphism_search(self):
        c = simplex_category(1)
        renamed = fincat.rename_category(c, {"0": "a", "1": "b"},
                                         {"id_0": "ia", "id_1": "ib", "0_1": "ab"})
        assert fincat.find_isomorphism(c, renamed) is not None
        assert fincat.find_isomorphism(c, walking_iso()) is None


class TestFlags:
    def test_poset_discrete_flag_complete(self):
        assert fincat.is_complete(fincat.discrete_flag(simplex_category(3)))

    def test_iso_discrete_flag_incomplete(self):
        fc = fincat.discrete_flag(walking_iso())
        assert not fincat.is_complete(fc)
        done = fincat.complete_flagged(fc)
        assert done.flag == walking_iso()
        assert fincat.is_complete(done)

    @given(small_categories())
    @settings(max_examples=25, deadline=None)
    def test_completion_idempotent(self, c):
        once = fincat.complete_flagged(fincat.discrete_flag(c))
        twice = fincat.complete_flagged(once)
        assert once.flag == twice.flag
        assert fincat.validate_flagged(once) == []


class TestFibration:
    def test_identities_only_gives_copy(self):
        c = simplex_category(2)
        p = fincat.identity_functor(c)
        q = free_cocart_fibration(p, list(c.identity.values()))
        assert fincat.find_isomorphism(q.source, c) is not None

    def test_interval_over_itself(self):
        c = simplex_category(1)
        q = free_cocart_fibration(fincat.identity_functor(c), c.morphisms)
        assert len(q.source.objects) == 3
        assert validate_category(q.source) == []
        assert fincat.validate_functor(q) == []

    def test_point_over_interval(self):
        c = simplex_category(1)
        p = point_at(c, "0")
        q = free_cocart_fibration(p, c.morphisms)
        assert set(q.source.objects) == {"(*,id_0)", "(*,0_1)"}
        assert sorted(fincat.split_tag(o)[:2] for o in q.source.objects) == \
            [list(x) for x in oracles.brute_comma_objects(p, c.morphisms)]

    def test_non_closed_rejected(self):
        c = simplex_category(2)
        with pytest.raises(ValueError):
            free_cocart_fibration(fincat.identity_functor(c),
                                  list(c.identity.values()) + ["0_1", "1_2"])

    def test_lifts_identity(self):
        c = simplex_category(2)
        ok, wit = has_cocartesian_lifts(fincat.identity_functor(c), c.morphisms)
        assert ok and all(wit[(e, f)] == f for (e, f) in wit)

    def test_lifts_discrete_fails(self):
        c = simplex_category(1)
        d = discrete(["a", "b"])
        p = FinFunctor(d, c, {"a": "0", "b": "1"}, {"id_a": "id_0", "id_b": "id_1"})
        ok, wit = has_cocartesian_lifts(p, c.morphisms)
        assert not ok and wit[("a", "0_1")] is None

    @given(small_categories(3), small_categories(2), st.data())
    @settings(max_examples=40, deadline=None)
    def test_lifts_iff_adjoint_over_base(self, e, c, data):
        fs = find_functors(e, c, limit=10)
        if not fs:
            return
        p = data.draw(st.sampled_from(fs))
        ok, _ = has_cocartesian_lifts(p, c.morphisms)
        assert ok == fincat.unit_has_left_adjoint(p, c.morphisms)

    def test_plain_adjoint_is_weaker(self):
        # the unit has an ordinary left adjoint here, but no lift exists
        iso = walking_iso()
        p = point_at(iso, "x")
        q = free_cocart_fibration(p, iso.morphisms)
        iota = fincat.comma_unit(p, q)
        assert fincat.left_adjoint_search(iota) is not None
        assert not has_cocartesian_lifts(p, iso.morphisms)[0]
        assert not fincat.unit_has_left_adjoint(p, iso.morphisms)
