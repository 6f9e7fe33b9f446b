import itertools
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symlin.combinat import OrderedComposition, Permutation, block_permutation, direct_sum, enumerate_permutations
from symlin.sphere import (
    INF,
    BasepointConstant,
    Compose,
    CoordinatePermutation,
    Identity,
    Reflection,
    SimplexPoint,
    Slice,
    SmashSpherePoint,
    Stabilize,
    check_coend,
    check_gamma_laws,
    check_stabilization,
    coend_adjoint,
    coend_adjoint_inv,
    fraction_str,
    gamma,
    gamma_inv,
    graft,
    parse_fraction,
    permute,
    point,
    random_cube_point,
    random_simplex_point,
    ray_adjoint,
    ray_adjoint_inv,
    reproduce_tower_example,
    simplex_grid,
    smash_gamma,
    stabilize,
    structure_map,
    structure_map_inv,
)

HALF = Q(1, 2)


@st.composite
def simplex_points(draw, n=None, max_n=4):
    n = n if n is not None else draw(st.integers(1, max_n))
    weights = draw(st.lists(st.integers(1, 40), min_size=n, max_size=n))
    total = sum(weights)
    return SimplexPoint(tuple(Q(w, total) for w in weights))


unit_interval = st.builds(lambda a, b: Q(a, a + b), st.integers(1, 60), st.integers(1, 60))


def cube_points(n):
    return st.tuples(*[unit_interval] * n)


class TestSimplexPoint:
    def test_valid(self):
        assert point(Q(1, 3), Q(2, 3)).arity == 2

    @pytest.mark.parametrize("coords", [(), (0, 1), (Q(1, 2), Q(1, 3)), (Q(3, 2), Q(-1, 2))])
    def test_invalid(self, coords):
        with pytest.raises(ValueError):
            SimplexPoint(coords)

    def test_json(self):
        assert point(Q(1, 3), Q(2, 3)).to_json() == ["1/3", "2/3"]
        assert point(1).to_json() == ["1"]

    def test_fraction_text(self):
        assert fraction_str(Q(6, 4)) == "3/2"
        assert parse_fraction(" 2/6 ") == Q(1, 3)

    def test_infinity_is_singleton(self):
        import pickle

        assert pickle.loads(pickle.dumps(INF)) is INF


class TestGamma:
    def test_example(self):
        out = gamma(point(HALF, HALF), [point(1), point(Q(1, 3), Q(2, 3))])
        assert out == point(HALF, Q(1, 6), Q(1, 3))

    def test_unary_unit(self):
        t = point(Q(1, 5), Q(4, 5))
        assert gamma(point(1), [t]) == t

    def test_basepoint_absorbs(self):
        assert gamma(INF, [point(1)]) is INF
        assert gamma(point(HALF, HALF), [point(1), INF]) is INF

    def test_arity_mismatch(self):
        with pytest.raises(ValueError):
            gamma(point(HALF, HALF), [point(1)])

    def test_inverse_example(self):
        s, ts = gamma_inv(point(HALF, Q(1, 6), Q(1, 3)), OrderedComposition(3, (1, 2)))
        assert s == point(HALF, HALF)
        assert ts == [point(1), point(Q(1, 3), Q(2, 3))]

    def test_inverse_trivial_blocks(self):
        u = point(Q(1, 4), Q(1, 4), HALF)
        assert gamma_inv(u, (3,)) == (point(1), [u])
        assert gamma_inv(u, (1, 1, 1)) == (u, [point(1)] * 3)

    def test_inverse_bad_blocks(self):
        with pytest.raises(ValueError):
            gamma_inv(point(HALF, HALF), (1, 2))

    def test_inverse_of_basepoint(self):
        assert gamma_inv(INF, (1, 2)) == (INF, [INF, INF])

    def test_barycentres_not_closed(self):
        out = gamma(point(HALF, HALF), [point(1), point(HALF, HALF)])
        assert out == point(HALF, Q(1, 4), Q(1, 4))
        assert out != point(Q(1, 3), Q(1, 3), Q(1, 3))

    @given(simplex_points(max_n=3), st.data())
    @settings(max_examples=150, deadline=None)
    def test_associative(self, s, data):
        ts = [data.draw(simplex_points(max_n=3)) for _ in range(s.arity)]
        us = [data.draw(simplex_points(max_n=2)) for t in ts for _ in range(t.arity)]
        grouped, pos = [], 0
        for t in ts:
            grouped.append(gamma(t, us[pos:pos + t.arity]))
            pos += t.arity
        assert gamma(gamma(s, ts), us) == gamma(s, grouped)

    @given(simplex_points(max_n=5), st.data())
    @settings(max_examples=150, deadline=None)
    def test_round_trip(self, u, data):
        k = data.draw(st.integers(1, u.arity))
        cuts = sorted(data.draw(st.sets(st.integers(1, u.arity - 1), min_size=k - 1, max_size=k - 1))) if k > 1 else []
        sizes = [b - a for a, b in zip([0, *cuts], [*cuts, u.arity])]
        assert gamma(*gamma_inv(u, sizes)) == u

    @given(simplex_points(max_n=3), st.data())
    @settings(max_examples=100, deadline=None)
    def test_block_equivariance(self, s, data):
        ts = [data.draw(simplex_points(max_n=3)) for _ in range(s.arity)]
        sigma = data.draw(st.sampled_from(enumerate_permutations(s.arity)))
        parts = [t.arity for t in ts]
        lhs = gamma(permute(sigma, s), sigma.apply(tuple(ts)))
        assert lhs == permute(block_permutation(sigma, parts), gamma(s, ts))

    @given(simplex_points(max_n=3), st.data())
    @settings(max_examples=100, deadline=None)
    def test_inner_equivariance(self, s, data):
        ts = [data.draw(simplex_points(max_n=3)) for _ in range(s.arity)]
        taus = [data.draw(st.sampled_from(enumerate_permutations(t.arity))) for t in ts]
        moved = [permute(tau, t) for tau, t in zip(taus, ts)]
        assert gamma(s, moved) == permute(direct_sum(taus), gamma(s, ts))


class TestPermute:
    def test_swap(self):
        assert permute(Permutation((2, 1)), point(Q(1, 3), Q(2, 3))) == point(Q(2, 3), Q(1, 3))

    def test_identity_and_basepoint(self):
        p = point(Q(1, 6), Q(1, 3), HALF)
        assert permute(Permutation.identity(3), p) == p
        assert permute(Permutation((2, 1)), INF) is INF

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            permute(Permutation((2, 1)), point(1))

    @given(simplex_points(n=3), st.sampled_from(enumerate_permutations(3)), st.sampled_from(enumerate_permutations(3)))
    def test_action_law(self, p, rho, sigma):
        assert permute(rho * sigma, p) == permute(rho, permute(sigma, p))


class TestSmash:
    def test_single_factor_is_gamma(self):
        s, t1, t2 = point(HALF, HALF), point(1), point(Q(1, 3), Q(2, 3))
        out = smash_gamma(SmashSpherePoint((s,)), [SmashSpherePoint((t1,)), SmashSpherePoint((t2,))])
        assert out == SmashSpherePoint((gamma(s, [t1, t2]),))

    def test_factorwise(self):
        a, b = point(Q(1, 3), Q(2, 3)), point(Q(1, 4), Q(3, 4))
        s = SmashSpherePoint((a, b))
        ts = [SmashSpherePoint((point(1), point(1))), SmashSpherePoint((a, b))]
        out = smash_gamma(s, ts)
        assert out.factors == (gamma(a, [point(1), a]), gamma(b, [point(1), b]))

    def test_basepoint_collapse(self):
        assert SmashSpherePoint.of([point(1), INF]) is INF
        s = SmashSpherePoint((point(1),))
        assert smash_gamma(s, [INF]) is INF
        assert graft(INF, s) is INF

    def test_mismatched_index_sets(self):
        s = SmashSpherePoint((point(1), point(1)))
        with pytest.raises(ValueError):
            smash_gamma(s, [SmashSpherePoint((point(1),))])

    def test_mixed_arity(self):
        with pytest.raises(ValueError):
            SmashSpherePoint((point(1), point(HALF, HALF))).arity

    @given(simplex_points(n=2), simplex_points(n=2), st.data())
    @settings(max_examples=50, deadline=None)
    def test_diagonal_equivariance(self, a, b, data):
        s = SmashSpherePoint((a, b))
        ts = [SmashSpherePoint((data.draw(simplex_points(n=2)), data.draw(simplex_points(n=2)))) for _ in range(2)]
        sigma = Permutation((2, 1))
        lhs = smash_gamma(s.act(sigma), sigma.apply(tuple(ts)))
        assert lhs == smash_gamma(s, ts).act(block_permutation(sigma, (2, 2)))

    def test_graft_matches_smash_gamma(self):
        rng = random.Random(3)
        s1 = SmashSpherePoint(tuple(random_simplex_point(rng, 2) for _ in range(2)))
        s2 = SmashSpherePoint(tuple(random_simplex_point(rng, 3) for _ in range(4)))
        split = [SmashSpherePoint((s2.factors[r], s2.factors[2 + r])) for r in range(2)]
        assert graft(s1, s2) == smash_gamma(s1, split)

    def test_graft_wrong_size(self):
        s1 = SmashSpherePoint((point(HALF, HALF),))
        with pytest.raises(ValueError):
            graft(s1, SmashSpherePoint((point(1),)))


class TestCoend:
    def test_dimension_one_is_identity(self):
        for k in range(1, 12):
            assert coend_adjoint(point(1), Q(k, 12)) == (Q(k, 12),)

    def test_example(self):
        assert coend_adjoint(point(Q(1, 3), Q(2, 3)), HALF) == (Q(1, 4), HALF)

    def test_centre_to_centre(self):
        assert coend_adjoint(point(Q(1, 3), Q(1, 3), Q(1, 3)), Q(3, 4)) == (HALF,) * 3
        assert coend_adjoint_inv((HALF,) * 3) == (point(Q(1, 3), Q(1, 3), Q(1, 3)), Q(3, 4))

    def test_basepoint(self):
        assert coend_adjoint(INF, HALF) is INF
        assert coend_adjoint(point(1), INF) is INF
        assert coend_adjoint_inv(INF) == (INF, INF)

    @pytest.mark.parametrize("x", [0, 1, Q(3, 2)])
    def test_circle_coordinate_range(self, x):
        with pytest.raises(ValueError):
            coend_adjoint(point(1), x)

    def test_inverse_rejects_boundary(self):
        with pytest.raises(ValueError):
            coend_adjoint_inv((HALF, 1))

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_barycentre_lands_on_diagonal(self, n):
        bary = SimplexPoint((Q(1, n),) * n)
        zs = [coend_adjoint(bary, Q(k, 10)) for k in range(1, 10)]
        assert all(len(set(z)) == 1 for z in zs)
        assert len({z[0] for z in zs}) == 9

    @given(simplex_points(max_n=4), unit_interval)
    @settings(max_examples=200, deadline=None)
    def test_round_trip(self, s, x):
        z = coend_adjoint(s, x)
        assert all(0 < c < 1 and isinstance(c, Q) for c in z)
        assert coend_adjoint_inv(z) == (s, x)

    @given(st.integers(1, 4).flatmap(cube_points))
    @settings(max_examples=200, deadline=None)
    def test_inverse_round_trip(self, z):
        assert coend_adjoint(*coend_adjoint_inv(z)) == z

    @given(simplex_points(n=3), unit_interval, st.sampled_from(enumerate_permutations(3)))
    @settings(max_examples=100, deadline=None)
    def test_equivariant(self, s, x, sigma):
        assert coend_adjoint(permute(sigma, s), x) == sigma.apply(coend_adjoint(s, x))

    def test_check_report(self):
        report = check_coend(samples=50, seed=1)
        assert report["status"] == "pass" and report["checked"] == 200 and report["witness"] is None


class TestRay:
    @given(simplex_points(max_n=4), unit_interval)
    @settings(max_examples=100, deadline=None)
    def test_round_trip(self, s, x):
        assert ray_adjoint_inv(ray_adjoint(s, x)) == (s, x)

    @given(simplex_points(n=2), simplex_points(n=2), simplex_points(n=1), unit_interval)
    @settings(max_examples=100, deadline=None)
    def test_composes_with_gamma(self, a, b, c, x):
        outer = ray_adjoint(a, x)
        stepwise = ray_adjoint(b, outer[0]) + ray_adjoint(c, outer[1])
        assert ray_adjoint(gamma(a, [b, c]), x) == stepwise

    def test_gauge_map_does_not_compose(self):
        a = b = point(HALF, HALF)
        c, x = point(1), Q(1, 3)
        outer = coend_adjoint(a, x)
        stepwise = coend_adjoint(b, outer[0]) + coend_adjoint(c, outer[1])
        assert coend_adjoint(gamma(a, [b, c]), x) != stepwise

    def test_structure_map_round_trip(self):
        rng = random.Random(5)
        for _ in range(50):
            mult = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 3)))
            z = random_cube_point(rng, sum(mult))
            s, x = structure_map_inv(z, mult)
            assert s.arities == mult
            assert structure_map(s, x) == z

    def test_structure_map_mismatch(self):
        with pytest.raises(ValueError):
            structure_map(SmashSpherePoint((point(1),)), (HALF, HALF))
        with pytest.raises(ValueError):
            structure_map_inv((HALF,), (2,))


class TestDescriptors:
    def test_basepoint_passes_through(self):
        for f in (Identity(2), CoordinatePermutation(Permutation((2, 1))), Reflection(2, (1,)), BasepointConstant(2, 2)):
            assert f(INF) is INF

    def test_reflection(self):
        assert Reflection(3, (1, 3))((Q(1, 4), HALF, Q(1, 3))) == (Q(3, 4), HALF, Q(2, 3))

    def test_compose_order(self):
        f = Compose(Reflection(2, (1,)), CoordinatePermutation(Permutation((2, 1))))
        assert f((Q(1, 4), Q(1, 3))) == (Q(2, 3), Q(1, 4))

    def test_compose_type_check(self):
        with pytest.raises(ValueError):
            Compose(Identity(2), Identity(3))

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            Identity(2)((HALF,))


class TestStabilize:
    def test_identity(self):
        rng = random.Random(0)
        for j in (1, 2, 3):
            g = stabilize(Identity(2), j)
            for _ in range(20):
                z = random_cube_point(rng, 2 * j)
                assert g(z) == z

    def test_identity_slice_is_structure_map(self):
        s = SmashSpherePoint((point(Q(1, 3), Q(2, 3)),))
        g = stabilize(Identity(1), 2, s)
        assert g((HALF,)) == structure_map(s, (HALF,))

    def test_swap_is_block_swap(self):
        swap = Permutation((2, 1))
        g = stabilize(CoordinatePermutation(swap), 2, functor="permutation")
        shuffle = block_permutation(swap, (2, 2))
        rng = random.Random(1)
        for _ in range(50):
            z = random_cube_point(rng, 4)
            assert g(z) == shuffle.apply(z)

    def test_identity_functor_swap_differs(self):
        swap = Permutation((2, 1))
        g = stabilize(CoordinatePermutation(swap), 2)
        z = (Q(1, 5), Q(1, 3), Q(1, 2), Q(1, 7))
        assert g(z) != block_permutation(swap, (2, 2)).apply(z)

    def test_swap_slice(self):
        swap = Permutation((2, 1))
        a, b = point(Q(1, 3), Q(2, 3)), point(Q(1, 4), Q(3, 4))
        x = (Q(1, 5), Q(2, 3))
        lhs = stabilize(CoordinatePermutation(swap), 2, SmashSpherePoint((a, b)))(x)
        assert lhs == ray_adjoint(a, x[1]) + ray_adjoint(b, x[0])

    def test_associative_slices(self):
        rng = random.Random(2)
        f = Reflection(2, (2,))
        s1 = SmashSpherePoint((random_simplex_point(rng, 2), random_simplex_point(rng, 2)))
        s2 = SmashSpherePoint(tuple(random_simplex_point(rng, 3) for _ in range(4)))
        two = stabilize(stabilize(f, 2, s1), 3, s2)
        one = stabilize(f, 6, graft(s1, s2))
        for _ in range(30):
            x = random_cube_point(rng, 2)
            assert two(x) == one(x)

    def test_associative_endomorphisms(self):
        rng = random.Random(4)
        f = Compose(CoordinatePermutation(Permutation((2, 1))), Reflection(2, (1,)))
        two = stabilize(stabilize(f, (1, 2)), (2, 1, 3))
        one = stabilize(f, (2, 4))
        for _ in range(30):
            z = random_cube_point(rng, 6)
            assert two(z) == one(z)

    def test_basepoint_constant(self):
        g = stabilize(BasepointConstant(1, 1), 2, SmashSpherePoint((point(HALF, HALF),)))
        assert g((HALF,)) is INF
        assert stabilize(BasepointConstant(1, 1), 2)((HALF, HALF)) is INF

    def test_errors(self):
        with pytest.raises(ValueError):
            stabilize(Identity(1), 2, INF)
        with pytest.raises(ValueError):
            stabilize(Identity(1), 2, SmashSpherePoint((point(1),)))
        with pytest.raises(ValueError):
            Stabilize(Identity(2), (1,))
        with pytest.raises(ValueError):
            Stabilize(Identity(1), (0,))
        with pytest.raises(ValueError):
            Stabilize(Identity(2), (1, 1), functor="permutation")
        with pytest.raises(ValueError):
            Stabilize(CoordinatePermutation(Permutation((2, 1))), (1, 2), functor="permutation")
        with pytest.raises(ValueError):
            Stabilize(Identity(1), (1,), functor="other")
        with pytest.raises(ValueError):
            Slice(Identity(2), SmashSpherePoint((point(1),)))

    def test_check_report(self):
        report = check_stabilization(samples=100, seed=3)
        assert report["status"] == "pass" and report["checked"] == 100


class TestTowerExample:
    def test_passes(self):
        report = reproduce_tower_example()
        assert report["status"] == "pass"
        assert report["failures"] == 0 and report["witness"] is None
        assert report["composite_point"] == ["1/4", "1/4", "1/2"]
        assert report["checked"] == 3 * 11 + 3**3

    def test_with_reflection(self):
        assert reproduce_tower_example(grid=6, f=Reflection(1, (1,)))["status"] == "pass"


class TestCheckers:
    def test_grid_size(self):
        pts = simplex_grid(2, 4)
        assert pts == [point(Q(1, 4), Q(3, 4)), point(Q(1, 3), Q(2, 3)), point(HALF, HALF), point(Q(2, 3), Q(1, 3)), point(Q(3, 4), Q(1, 4))]

    def test_grid_counts(self):
        # distinct points with coordinates over a common denominator <= d
        for n in (1, 2, 3):
            expected = {
                tuple(Q(p, d) for p in parts)
                for d in range(n, 7)
                for parts in itertools.product(range(1, d), repeat=n)
                if sum(parts) == d
            } if n > 1 else {(Q(1),)}
            assert len(simplex_grid(n, 6)) == len(expected)

    def test_small_gamma_check(self):
        report = check_gamma_laws(samples=200, seed=0, max_den=3, max_total=3)
        assert report["status"] == "pass" and report["checked"] > 200

    def test_mutated_gamma_is_caught(self, monkeypatch):
        import symlin.sphere as sphere

        real = sphere.gamma

        def skewed(s, ts):
            out = real(s, ts)
            if out is INF or out.arity != 3 or len(ts) != 2 or ts[0].arity != 2:
                return out
            a, b, c = out.coords
            return SimplexPoint((b, a, c))

        monkeypatch.setattr(sphere, "gamma", skewed)
        report = sphere.check_gamma_laws(samples=100, seed=0, max_den=3, max_total=3)
        assert report["status"] == "fail" and report["witness"]["laws"]
