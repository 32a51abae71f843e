"""Window points, overlap claims, towers, and the near-identity probe.

The worked instance used throughout pulls back to
alpha = (401/100000, 99200/100000, 399/100000) through the squared
positive loop at (3,2,1); every frozen constant below was computed
independently with exact arithmetic before being pinned here.
"""

from fractions import Fraction as F

import pytest

from ietkit.errors import CapExceededError, TowerDisjointnessError
from ietkit.iet import Iet, Permutation
from ietkit.numeric import HalfOpenInterval, interval_set
from ietkit.whirly import (
    PairSets,
    SelfShift,
    WeakMetricConfig,
    WhirlyWindow,
    analyze_window_hits,
    build_tower,
    construct_window_point,
    dyadic_generating_interval,
    find_positive_loop,
    find_window_hits,
    harvest_candidate_powers,
    in_window_core,
    small_window_constant,
    tower_coverage_bound,
    tower_stack,
    verify_overlap_claims,
    weak_distance,
    weak_distance_tail,
    whirly_probe,
)

SYM3 = Permutation.symmetric(3)
ALPHA = (F(401, 100000), F(99200, 100000), F(399, 100000))


@pytest.fixture(scope="module")
def window():
    return WhirlyWindow(F(1, 100), F(1, 100), find_positive_loop())


@pytest.fixture(scope="module")
def worked(window):
    return construct_window_point(ALPHA, window)


class TestWeakMetric:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            WeakMetricConfig(truncation=0)
        assert WeakMetricConfig(truncation=5).tail == F(1, 32)

    def test_dyadic_family_layout(self):
        assert dyadic_generating_interval(1, 1) == HalfOpenInterval(0, F(1, 2))
        assert dyadic_generating_interval(2, 1) == HalfOpenInterval(F(1, 2), 1)
        assert dyadic_generating_interval(3, 1) == HalfOpenInterval(0, F(1, 4))
        assert dyadic_generating_interval(6, 1) == HalfOpenInterval(F(3, 4), 1)
        assert dyadic_generating_interval(7, 1) == HalfOpenInterval(0, F(1, 8))
        # The family scales with the domain.
        assert dyadic_generating_interval(3, 2) == HalfOpenInterval(0, F(1, 2))
        with pytest.raises(ValueError):
            dyadic_generating_interval(0, 1)

    def test_frozen_distances_to_identity(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 4)), SYM3)
        assert weak_distance(1, 0, t, WeakMetricConfig(truncation=1)) == F(1, 2)
        assert weak_distance(1, 0, t, WeakMetricConfig(truncation=3)) == F(13, 16)
        assert weak_distance(1, 0, t, WeakMetricConfig(truncation=20)) == F(
            7307199, 8388608
        )

    def test_distance_properties(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 4)), SYM3)
        assert weak_distance(3, 3, t) == 0
        assert weak_distance(2, 0, t) == weak_distance(0, 2, t)
        # Truncating later only adds nonnegative terms.
        by_depth = [
            weak_distance(1, 0, t, WeakMetricConfig(truncation=n))
            for n in range(1, 8)
        ]
        assert by_depth == sorted(by_depth)

    def test_tail_bound(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 4)), SYM3)
        assert weak_distance_tail(t, WeakMetricConfig(truncation=4)) == F(1, 16)


class TestPositiveLoop:
    def test_frozen_loop(self):
        loop = find_positive_loop()
        assert loop.path.word() == "ababab"
        assert loop.matrix.to_rows() == [[2, 3, 2], [1, 4, 2], [1, 1, 1]]
        assert loop.row_ratio == 4
        assert loop.transpose_row_ratio == 4
        assert loop.first_row_max == 3

    def test_squared_loop_return_times(self, window):
        assert window.squared.to_rows() == [
            [9, 20, 12], [8, 21, 12], [4, 8, 5],
        ]
        assert window.squared.column_sums() == (21, 49, 29)

    def test_search_cap(self):
        with pytest.raises(CapExceededError):
            find_positive_loop(max_len=5)


class TestWindowCore:
    def test_worked_alpha_is_inside(self):
        assert in_window_core(ALPHA, F(1, 100), F(1, 100))

    def test_boundaries_are_strict(self):
        # alpha2 exactly at (1 - eps1) * total fails the open condition.
        assert not in_window_core((F(1, 200), F(99, 100), F(1, 200)),
                                  F(1, 100), F(1, 100))
        # Outer lengths out of order fail.
        assert not in_window_core((F(399, 100000), F(99200, 100000),
                                   F(401, 100000)), F(1, 100), F(1, 100))

    def test_scaling_invariance(self):
        scaled = tuple(7 * v for v in ALPHA)
        assert in_window_core(scaled, F(1, 100), F(1, 100))

    def test_nonpositive_is_outside(self):
        assert not in_window_core((F(0), F(1, 2), F(1, 2)), F(1, 10), F(1, 10))

    def test_validation(self):
        with pytest.raises(ValueError):
            in_window_core((F(1, 2), F(1, 2)), F(1, 10), F(1, 10))
        with pytest.raises(ValueError):
            in_window_core(ALPHA, F(0), F(1, 10))
        with pytest.raises(ValueError):
            WhirlyWindow(F(1), F(1, 2), find_positive_loop())

    def test_construct_window_point(self, window, worked):
        assert worked.lengths == (
            F(1992397, 100000), F(522799, 25000), F(797199, 100000),
        )
        assert worked.total == F(610099, 12500)
        assert worked.lengths == window.squared.apply(ALPHA)

    def test_construct_rejects_outside_core(self, window):
        with pytest.raises(ValueError):
            construct_window_point((F(1, 3), F(1, 3), F(1, 3)), window)


class TestTowers:
    def test_single_floor(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        tower = build_tower(t, HalfOpenInterval(0, F(1, 20)), 1)
        assert tower.covered_measure == F(1, 20)
        assert tower.floors == (interval_set((0, F(1, 20))),)

    def test_collision_raises_with_floor_index(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        with pytest.raises(TowerDisjointnessError) as info:
            build_tower(t, HalfOpenInterval(0, F(1, 2)), 3)
        assert info.value.floor_index == 1

    def test_stack_over_half_window(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        stack = tower_stack(t, F(1, 2))
        assert [tw.height for tw in stack.towers] == [1, 2, 2]
        assert [tw.base for tw in stack.towers] == [
            HalfOpenInterval(0, F(1, 20)),
            HalfOpenInterval(F(1, 20), F(3, 10)),
            HalfOpenInterval(F(3, 10), F(1, 2)),
        ]
        assert stack.covered_measure == F(19, 20)
        assert stack.covered_measure == t.total
        assert stack.remainder.is_empty

    def test_floors_partition_the_domain(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        stack = tower_stack(t, F(1, 2))
        floors = [fl for tw in stack.towers for fl in tw.floors]
        union = floors[0]
        for fl in floors[1:]:
            assert union.intersect(fl).is_empty
            union = union.union(fl)
        assert union == interval_set((0, t.total))

    def test_validation(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        with pytest.raises(ValueError):
            build_tower(t, HalfOpenInterval(0, F(1, 20)), 0)
        with pytest.raises(ValueError):
            build_tower(t, HalfOpenInterval(0, 2), 1)
        with pytest.raises(ValueError):
            tower_stack(t, 2)


class TestOverlapClaims:
    def test_worked_instance_rows(self, worked, window):
        report = verify_overlap_claims(worked, window, l=2)
        assert report.all_hold
        assert report.gamma == ALPHA
        assert report.sums == (21, 49, 29)
        values = {r.quantity: (r.computed, r.bound, r.holds) for r in report.rows}
        assert values["c1_middle_overlap"] == (
            F(24799, 25000), F(24799, 25000), True,
        )
        assert values["c1_window_bound"] == (
            F(24799, 25000), F(306838, 309375), True,
        )
        assert values["c2_tower_remainder"] == (
            F(2499, 12500), F(2499, 12500), True,
        )
        assert values["c2_remainder_bound"] == (
            F(2499, 12500), F(610099, 1237500), True,
        )
        assert values["c3_shifted_overlap"] == (
            F(397, 50000), F(19551, 5000000), True,
        )
        assert values["c3_witness_escape"] == (F(0), F(0), True)

    def test_csv_rows_shape(self, worked, window):
        rows = verify_overlap_claims(worked, window).to_csv_rows()
        assert len(rows) == 6
        assert rows[0][0] == "c1_middle_overlap"
        assert all(len(r) == 4 for r in rows)
        assert all(r[3] == "true" for r in rows)

    def test_rejects_non_window_points(self, window):
        with pytest.raises(ValueError):
            verify_overlap_claims(Iet((F(1, 3),) * 3, SYM3), window)
        with pytest.raises(ValueError):
            verify_overlap_claims(Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3),
                                  window)

    def test_l_validation(self, worked, window):
        with pytest.raises(ValueError):
            verify_overlap_claims(worked, window, l=0)


class TestWindowConstants:
    def test_frozen_constants(self):
        assert small_window_constant(F(1, 10), 2) == F(1, 32)
        assert small_window_constant(F(1, 20), 1) == F(1, 64)
        assert small_window_constant(F(1, 20), 3) == F(1, 64)

    def test_monotone_in_eps(self):
        assert small_window_constant(F(1, 100), 2) <= small_window_constant(
            F(1, 10), 2
        )

    def test_validation(self):
        with pytest.raises(ValueError):
            small_window_constant(F(0), 1)
        with pytest.raises(ValueError):
            small_window_constant(F(1, 10), 0)


class TestWindowScan:
    def test_worked_instance_hit(self, worked):
        scan = find_window_hits(worked, F(1, 10), 2, depth=40)
        assert scan.cap == F(1, 32)
        assert len(scan.hits) == 1
        hit = scan.hits[0]
        assert hit.step == 0
        assert hit.dyadic == F(1, 64)
        assert hit.gamma == ALPHA
        assert hit.sums == (21, 49, 29)

    def test_scan_stops_at_ties_without_losing_hits(self, worked):
        # The worked instance ties eventually; the scan keeps earlier hits.
        scan = find_window_hits(worked, F(1, 10), 2, depth=10 ** 6)
        assert scan.truncated
        assert len(scan.hits) >= 1

    def test_plain_instances_have_no_hits(self):
        scan = find_window_hits(
            Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3), F(1, 10), 2, depth=10
        )
        assert scan.hits == ()

    def test_requires_reversing_permutation(self):
        with pytest.raises(ValueError):
            find_window_hits(Iet((F(1, 3),) * 3, Permutation((2, 3, 1))),
                             F(1, 10), 2)

    def test_harvest(self, worked):
        assert harvest_candidate_powers(worked, F(1, 20), depth=40) == (
            49, 98, 147,
        )


class TestHitAnalysis:
    def test_worked_instance_report(self, worked):
        report = analyze_window_hits(worked, F(1, 10), 2, depth=40)
        assert report.powers == (98,)
        assert report.all_hold
        analysis = report.analyses[0]
        assert analysis.returns_verified
        assert analysis.floors_verified
        rows = {r.quantity: r for r in analysis.rows}
        assert rows["p1_window_overlap"].computed == F(49599, 50000)
        assert rows["p1_window_overlap"].bound == F(9, 10)
        assert rows["p2_tower_remainder"].computed == F(2499, 12500)
        assert rows["p3_shifted_overlap"].computed == F(397, 50000)
        assert rows["p3_shifted_overlap"].bound == F(12369, 3200000)
        # The uniform one-third variant is reported but expected to fail
        # on instances this close to the window edge.
        third = rows["p3_uniform_third_bound"]
        assert third.informational and not third.holds


class TestCoverage:
    def test_worked_instance_bound(self, worked, window):
        report = tower_coverage_bound(worked, window)
        assert report.a_star == 4
        assert report.alpha_total == 1
        assert report.lhs == 4
        assert report.rhs == F(610099, 1237500)
        assert report.holds
        assert report.eta == (F(374, 125), F(397999, 100000), F(1))
        assert report.eta_ratio_ok
        assert report.tower.height == 4
        assert report.tower.covered_measure == 4

    def test_rejects_non_window_points(self, window):
        with pytest.raises(ValueError):
            tower_coverage_bound(Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3),
                                 window)


class TestProbe:
    def test_self_shift_first_success_powers(self, worked):
        subject = interval_set((0, 1))
        cache: dict = {}
        expected = {
            1: (49, F(7895983549, 2558940676096), F(399, 50000), 11),
            2: (98, F(3803866165, 2558940676096), F(397, 50000), 12),
            3: (147, F(877190443, 365562953728), F(79, 10000), 13),
        }
        for shift, (n, dist, overlap, attempts) in expected.items():
            report = whirly_probe(
                worked, SelfShift(subject, shift), F(1, 20),
                distance_cache=cache,
            )
            assert report.success
            assert report.power == n
            assert report.distance == dist
            assert report.overlap == overlap
            assert report.attempts == attempts
            assert report.candidates == tuple(list(range(1, 11)) + [49, 98, 147])
            assert report.distance + report.tail < F(1, 20)

    def test_rejected_candidates_have_zero_overlap(self, worked):
        # 49 + 2, 49 + 3 and 98 + 3 are not sums of return times, so the
        # shifted images cannot meet the subject.
        subject = interval_set((0, 1))
        for n, shift in ((49, 2), (49, 3), (98, 3)):
            img = worked.image_set(subject, n)
            back = worked.image_set(subject, -shift)
            assert img.intersect(back).measure == 0

    def test_pair_sets_trivial_instance(self, worked):
        domain = interval_set((0, worked.total))
        report = whirly_probe(worked, PairSets(domain, domain), F(1))
        assert report.success and report.power == 1
        assert report.mode == "pairSets" and report.shift is None

    def test_pair_sets_small_example(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        report = whirly_probe(
            t,
            PairSets(interval_set((0, F(1, 4))), interval_set((F(1, 8), F(3, 8)))),
            F(1, 2),
        )
        assert report.success and report.power == 2
        assert report.overlap == F(7, 40)

    def test_explicit_candidates_are_used_verbatim(self, worked):
        report = whirly_probe(
            worked, SelfShift(interval_set((0, 1)), 1), F(1, 20),
            search=(98, 49),
        )
        assert report.candidates == (49, 98)
        assert report.power == 49

    def test_unreachable_eps_fails(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        report = whirly_probe(
            t, SelfShift(interval_set((0, F(1, 2))), 1), F(1, 10 ** 9)
        )
        assert not report.success
        assert report.power is None and report.distance is None

    def test_distance_cache_is_shared(self, worked):
        cache: dict = {}
        mode = SelfShift(interval_set((0, 1)), 1)
        whirly_probe(worked, mode, F(1, 20), distance_cache=cache)
        assert set(cache) == set(range(1, 11)) | {49}
        assert cache[49] == F(7895983549, 2558940676096) * worked.total

    def test_json_shape(self, worked):
        report = whirly_probe(worked, SelfShift(interval_set((0, 1)), 2),
                              F(1, 20))
        data = report.to_json_dict()
        assert data["success"] is True
        assert data["n"] == 98
        assert data["mode"] == "selfShift"
        assert data["l"] == 2
        assert data["metric_truncation"] == 20
        assert data["weak_distance"] == "3803866165/2558940676096"

    def test_validation(self, worked):
        with pytest.raises(ValueError):
            whirly_probe(worked, SelfShift(interval_set((0, 1)), 0), F(1, 20))
        with pytest.raises(ValueError):
            whirly_probe(worked, SelfShift(interval_set(), 1), F(1, 20))
        with pytest.raises(ValueError):
            whirly_probe(
                worked,
                PairSets(interval_set((0, 50)), interval_set((0, 1))),
                F(1, 20),
            )
        with pytest.raises(ValueError):
            whirly_probe(worked, SelfShift(interval_set((0, 1)), 1), F(0))
        with pytest.raises(ValueError):
            whirly_probe(worked, SelfShift(interval_set((0, 1)), 1), F(1, 20),
                         search=())
        with pytest.raises(ValueError):
            whirly_probe(worked, SelfShift(interval_set((0, 1)), 1), F(1, 20),
                         search=(0, 3))
