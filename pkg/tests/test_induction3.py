"""Renormalization step, closed loops, and return times for 3-exchanges."""

from fractions import Fraction as F

import pytest

from ietkit.errors import CapExceededError, SaddleConnectionError
from ietkit.iet import Iet, Permutation
from ietkit.induction3 import (
    block_path,
    brute_force_return_times,
    closed_path_sums,
    invariant_density,
    return_time_identity,
    veech_step,
)

SYM3 = Permutation.symmetric(3)


class TestVeechStep:
    def test_frozen_example(self):
        result = veech_step(Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3))
        assert result.alpha == (F(1, 20), F(1, 4), F(1, 5))
        assert result.steps == 2
        assert result.sums == (1, 2, 2)
        assert result.map.perm == SYM3
        assert result.map.total == F(1, 2)

    def test_frozen_integer_example(self):
        result = veech_step(Iet((F(1), F(1), F(1, 3)), SYM3))
        assert result.alpha == (F(1, 3), F(1, 3), F(1, 3))
        assert result.steps == 3
        assert result.sums == (2, 3, 2)
        assert "".join(m.value for m in result.moves) == "aba"

    def test_matrix_reconstructs_start(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        result = veech_step(t)
        assert result.matrix.apply(result.alpha) == t.lengths

    def test_return_identity(self):
        for lengths in ((F(1, 2), F(1, 4), F(1, 5)), (F(1), F(1), F(1, 3))):
            assert return_time_identity(veech_step(Iet(lengths, SYM3)))

    def test_stops_at_the_larger_outer_length(self):
        # The cut total equals max of the two outer lengths by definition.
        result = veech_step(Iet((F(1, 7), F(4, 7), F(3, 11)), SYM3))
        assert result.map.total == F(3, 11)
        assert result.sums == (2, 6, 5)

    def test_agrees_with_direct_induction(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        result = veech_step(t)
        induced = t.induced_map(F(1, 2))
        assert induced.map.lengths == result.alpha
        assert induced.return_times == result.sums

    def test_rejects_other_shapes(self):
        with pytest.raises(ValueError):
            veech_step(Iet((F(1, 2), F(1, 2)), Permutation((2, 1))))
        with pytest.raises(ValueError):
            veech_step(Iet((F(1, 3),) * 3, Permutation((2, 3, 1))))

    def test_tie_propagates(self):
        with pytest.raises(SaddleConnectionError):
            veech_step(Iet((F(1, 2), F(1, 4), F(1, 4)), SYM3))

    def test_cap(self):
        with pytest.raises(CapExceededError):
            veech_step(Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3), cap=1)


class TestClosedPaths:
    def test_block_paths_are_loops(self):
        for kind in ("aba", "bab"):
            for repeats in (0, 1, 5):
                path = block_path(kind, repeats)
                assert path.is_loop()
                assert len(path.moves) == repeats + 2

    def test_word_layout(self):
        assert block_path("aba", 3).word() == "abbba"
        assert block_path("bab", 2).word() == "baab"

    def test_frozen_sums(self):
        assert closed_path_sums("aba", 0) == (1, 2, 2)
        assert closed_path_sums("aba", 1) == (2, 3, 2)
        assert closed_path_sums("aba", 5) == (6, 7, 2)
        assert closed_path_sums("aba", 50) == (51, 52, 2)
        assert closed_path_sums("bab", 0) == (2, 2, 1)
        assert closed_path_sums("bab", 5) == (2, 7, 6)

    def test_sums_satisfy_return_identity(self):
        for kind in ("aba", "bab"):
            for repeats in range(0, 11):
                a1, a2, a3 = closed_path_sums(kind, repeats)
                assert a2 + 1 == a1 + a3

    def test_validation(self):
        with pytest.raises(ValueError):
            block_path("abc", 1)
        with pytest.raises(ValueError):
            block_path("aba", -1)


class TestInvariantDensity:
    def test_frozen_values(self):
        assert invariant_density((F(1, 4), F(1, 2), F(1, 4))) == F(128, 27)
        assert invariant_density((F(3, 7), F(3, 7), F(1, 7))) == F(1715, 288)

    def test_needs_unit_total(self):
        with pytest.raises(ValueError):
            invariant_density((F(1, 2), F(1, 4), F(1, 5)))

    def test_rejects_poles_and_nonpositive(self):
        with pytest.raises(ValueError):
            invariant_density((F(1), F(0), F(0)))
        with pytest.raises(ValueError):
            invariant_density((F(1, 2), F(3, 4), F(-1, 4)))

    def test_needs_three_lengths(self):
        with pytest.raises(ValueError):
            invariant_density((F(1, 2), F(1, 2)))


class TestBruteForceReturns:
    def test_frozen_example(self):
        t = Iet((F(1, 2), F(1, 4), F(1, 5)), SYM3)
        assert brute_force_return_times(t) == (1, 2, 2)

    def test_agrees_with_matrix_route(self):
        for lengths in (
            (F(1), F(1), F(1, 3)),
            (F(3, 11), F(5, 7), F(2, 13)),
            (F(5, 17), F(3, 5), F(2, 7)),
            (F(7, 19), F(5, 11), F(3, 23)),
        ):
            t = Iet(lengths, SYM3)
            assert brute_force_return_times(t) == veech_step(t).sums
