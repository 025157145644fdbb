import random
from fractions import Fraction

import pytest

from symcone import (
    GroundSet,
    HCone,
    NotPointedError,
    Ray,
    UnsupportedSizeError,
    canonical_partition,
    canonical_representatives,
    conic_decompose,
    contains,
    elemental_count,
    extreme_rays,
    facet_reduction_check,
    family_Un,
    gamma_n_hrep,
    gap_witness,
    normalize_ray,
    psi_p_hrep,
    reduced_facet_row,
    to_sym,
    u1_loop,
    uniform,
)
from symcone.cone import _row_rank
from symcone.setfn import elemental_facet_ids
from symcone.symmetry import facet_orbit_label


def svec(h, p):
    return to_sym(h, p).free_values()


def quadrant():
    return HCone(2, (((1, 0), "x"), ((0, 1), "y")))


class TestHRepConstruction:
    def test_one_block_rows(self):
        n = 5
        cone = psi_p_hrep(canonical_partition((n,)))
        # coordinates s_1..s_n; expected rows: s_n - s_{n-1} and the
        # concavity rows 2 s_{k+1} - s_k - s_{k+2} (origin dropped)
        got = {coeffs for coeffs, _ in cone.rows}
        expected = {tuple(1 if i == n - 1 else -1 if i == n - 2 else 0 for i in range(n))}
        for k in range(n - 1):  # row for pairs with |K| = k
            row = [0] * n
            row[k] += 2
            if k > 0:
                row[k - 1] -= 1
            row[k + 1] -= 1
            expected.add(tuple(row))
        assert got == expected

    def test_two_block_row_count(self):
        for n in (3, 4, 5, 6):
            cone = psi_p_hrep(canonical_partition((1, n - 1)))
            assert len(cone.rows) == 2 + (n - 1) + 2 * (n - 2)
            assert cone.dim == 2 * n - 1

    def test_gamma_row_counts(self):
        for n in (2, 3, 4):
            cone = gamma_n_hrep(GroundSet(n))
            assert len(cone.rows) == elemental_count(n)
            assert cone.dim == (1 << n) - 1

    def test_rejects_duplicates_and_zero_rows(self):
        with pytest.raises(ValueError):
            HCone(2, (((1, 0), "a"), ((2, 0), "b")))  # same direction
        with pytest.raises(ValueError):
            HCone(2, (((0, 0), "a"),))

    def test_reduced_rows_match_cone_rows(self):
        p = canonical_partition((2, 2))
        by_label = {label: coeffs for coeffs, label in psi_p_hrep(p).rows}
        for fid in elemental_facet_ids(p.ground):
            label = facet_orbit_label(fid, p)
            assert reduced_facet_row(fid, p) == by_label[label]


class TestExtremeRays:
    def test_quadrant(self):
        rays = extreme_rays(quadrant())
        assert [r.direction for r in rays] == [(0, 1), (1, 0)]

    def test_one_block_rays_are_uniform_ranks(self):
        for n in (2, 3, 4, 5):
            p = canonical_partition((n,))
            rays = {r.direction for r in extreme_rays(psi_p_hrep(p))}
            expected = {normalize_ray(svec(uniform(m, n), p)).direction for m in range(1, n + 1)}
            assert rays == expected

    def test_two_block_ray_counts(self):
        for n, count in ((2, 3), (3, 6), (4, 10)):
            p = canonical_partition((1, n - 1))
            assert len(extreme_rays(psi_p_hrep(p))) == count

    def test_row_order_invariance(self, rng):
        p = canonical_partition((1, 3))
        cone = psi_p_hrep(p)
        baseline = {r.direction for r in extreme_rays(cone)}
        rows = list(cone.rows)
        for _ in range(5):
            rng.shuffle(rows)
            shuffled = HCone(cone.dim, tuple(rows), cone.coords)
            assert {r.direction for r in extreme_rays(shuffled)} == baseline

    def test_not_pointed_reports_line(self):
        cone = HCone(2, (((1, 0), "only"),))
        with pytest.raises(NotPointedError) as err:
            extreme_rays(cone)
        d = err.value.direction
        assert d != (0, 0) and d[0] * 1 + d[1] * 0 == 0

    def test_dimension_cap(self):
        cone = gamma_n_hrep(GroundSet(5))
        with pytest.raises(UnsupportedSizeError):
            extreme_rays(cone, max_dim=20)
        with pytest.raises(UnsupportedSizeError):
            extreme_rays(psi_p_hrep(canonical_partition((2, 3))), max_dim=5)

    def test_gamma3_ray_inventory_properties(self):
        cone = gamma_n_hrep(GroundSet(3))
        rays = extreme_rays(cone)
        dim = cone.dim
        for ray in rays:
            values = cone.row_values(ray.direction)
            assert all(v >= 0 for v in values)
            tight_rows = [
                coeffs for (coeffs, _), v in zip(cone.rows, values) if v == 0
            ]
            assert _row_rank(tight_rows) == dim - 1
        # every facet row supports dim-1 independent tight rays
        for coeffs, _ in cone.rows:
            tight_rays = [
                r.direction
                for r in rays
                if sum(c * x for c, x in zip(coeffs, r.direction)) == 0
            ]
            assert _row_rank(tight_rays) == dim - 1

    def test_full_cone_on_four_elements(self):
        cone = gamma_n_hrep(GroundSet(4))
        rays = extreme_rays(cone)
        assert len(rays) == 41
        for ray in rays:
            values = cone.row_values(ray.direction)
            assert all(v >= 0 for v in values)
            tight = [c for (c, _), v in zip(cone.rows, values) if v == 0]
            assert _row_rank(tight) == cone.dim - 1

    def test_each_ray_is_irredundant(self):
        for parts in ((4,), (1, 3)):
            cone = psi_p_hrep(canonical_partition(parts))
            rays = extreme_rays(cone)
            for i, ray in enumerate(rays):
                others = [r.direction for j, r in enumerate(rays) if j != i]
                res = conic_decompose(ray.direction, others)
                assert not res.feasible

    def test_ray_normalization(self):
        assert normalize_ray((Fraction(1, 2), Fraction(3, 2))).direction == (1, 3)
        assert normalize_ray((-2, -4)).direction == (1, 2)
        with pytest.raises(ValueError):
            Ray((2, 4))


class TestContains:
    def test_gap_witness_in_reduced_cone(self):
        p = canonical_partition((2, 2))
        assert contains(psi_p_hrep(p), svec(gap_witness(2, 2), p))

    def test_negated_ray_outside(self):
        p = canonical_partition((4,))
        vec = [-x for x in svec(uniform(1, 4), p)]
        assert not contains(psi_p_hrep(p), vec)

    def test_zero_vector_inside(self):
        cone = psi_p_hrep(canonical_partition((2, 2)))
        assert contains(cone, (0,) * cone.dim)


class TestConicDecompose:
    def test_recovers_known_combination(self):
        p = canonical_partition((4,))
        gens = [svec(uniform(m, 4), p) for m in range(1, 5)]
        target = [a + 2 * c for a, c in zip(gens[0], gens[2])]
        res = conic_decompose(target, gens)
        assert res.feasible
        assert res.coefficients == (1, 0, 2, 0)

    def test_gap_witness_decomposes_over_reduced_rays(self):
        p = canonical_partition((2, 2))
        rays = extreme_rays(psi_p_hrep(p))
        res = conic_decompose(svec(gap_witness(2, 2), p), rays)
        assert res.feasible
        recon = [
            sum(c * r.direction[i] for c, r in zip(res.coefficients, rays))
            for i in range(len(rays[0].direction))
        ]
        assert recon == list(svec(gap_witness(2, 2), p))

    def test_farkas_certificate_contract(self, rng):
        p = canonical_partition((1, 2))
        gens = [svec(u, p) for u in family_Un(3)]
        dim = len(gens[0])
        found = 0
        while found < 5:
            vec = [Fraction(rng.randint(-4, 4)) for _ in range(dim)]
            res = conic_decompose(vec, gens)
            if res.feasible:
                continue
            found += 1
            w = res.certificate
            assert all(sum(a * b for a, b in zip(w, g)) >= 0 for g in gens)
            assert sum(a * b for a, b in zip(w, vec)) < 0

    def test_empty_generator_list(self):
        res = conic_decompose((0, 0), [])
        assert res.feasible and res.coefficients == ()
        res = conic_decompose((1, 0), [])
        assert not res.feasible

    def test_round_trip_on_random_cone_points(self, rng):
        p = canonical_partition((1, 3))
        gens = [svec(u, p) for u in family_Un(4)]
        for _ in range(10):
            weights = [Fraction(rng.randint(0, 3), rng.randint(1, 2)) for _ in gens]
            target = [
                sum(w * g[i] for w, g in zip(weights, gens))
                for i in range(len(gens[0]))
            ]
            res = conic_decompose(target, gens)
            assert res.feasible
            recon = [
                sum(c * g[i] for c, g in zip(res.coefficients, gens))
                for i in range(len(target))
            ]
            assert recon == target


class TestRelabeledBlocks:
    def test_interleaved_blocks_behave_like_canonical(self):
        g = GroundSet(4)
        from symcone import Partition

        canonical = canonical_partition((2, 2), g)
        interleaved = Partition.parse("1,3|2,4", g)
        assert facet_reduction_check(interleaved)
        a = extreme_rays(psi_p_hrep(canonical))
        b = extreme_rays(psi_p_hrep(interleaved))
        assert {r.direction for r in a} == {r.direction for r in b}


class TestFacetReduction:
    def test_standard_partitions(self):
        assert facet_reduction_check(canonical_partition((2, 2)))
        assert facet_reduction_check(canonical_partition((4,)))
        assert facet_reduction_check(canonical_partition((1, 1, 1, 1)))

    def test_all_canonical_n_up_to_4(self):
        for n in (2, 3, 4):
            for p in canonical_representatives(n):
                assert facet_reduction_check(p)

    def test_membership_equivalence_on_named_points(self):
        p = canonical_partition((2, 2))
        full = gamma_n_hrep(p.ground)
        red = psi_p_hrep(p)
        h = gap_witness(2, 2)
        assert full.contains(h.values[1:]) and red.contains(svec(h, p))
        bad = -1 * u1_loop(4)
        assert not full.contains(bad.values[1:])


class TestHConeText:
    def test_header_and_rows(self):
        p = canonical_partition((1, 1))
        text = psi_p_hrep(p).to_text().splitlines()
        assert text[0] == "3 3 labels"
        assert text[1].startswith("[1_2(1)|0]:")
