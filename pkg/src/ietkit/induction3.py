"""Induction specialized to three intervals over the reversing permutation.

The central operation runs length induction until the total length first
equals max(lambda_1, lambda_3); at that point the permutation must be the
reversing one again and the accumulated visitation matrix encodes the
first-return times of the shortened interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceededError, InductionTargetError
from .iet import DEFAULT_ORBIT_CAP, Iet, Permutation
from .numeric import Rational, rational
from .rauzy import RauzyMove, RauzyPath, VisitationMatrix, rv_step

SYMMETRIC_3 = Permutation.symmetric(3)


def _require_symmetric3(t: Iet) -> None:
    if t.size != 3 or t.perm != SYMMETRIC_3:
        raise ValueError(
            f"expected a 3-interval exchange over {SYMMETRIC_3}, got {t.perm}"
        )


@dataclass(frozen=True)
class VeechStep:
    """Result of inducing on [0, max(lambda_1, lambda_3))."""

    start: Iet
    map: Iet
    moves: tuple
    matrix: VisitationMatrix

    @property
    def alpha(self) -> tuple:
        """Length vector of the induced exchange."""
        return self.map.lengths

    @property
    def steps(self) -> int:
        return len(self.moves)

    @property
    def sums(self) -> tuple:
        """Column sums of the matrix: first-return times of the pieces."""
        return self.matrix.column_sums()


def veech_step(t: Iet, cap: int = DEFAULT_ORBIT_CAP) -> VeechStep:
    """Induce until the total length equals max(lambda_1, lambda_3).

    Successive induction steps shrink the supporting interval; the target
    length is always reached from above because the first step removes
    min(lambda_1, lambda_3). Stops at the first state whose total equals
    the target, which must carry the reversing permutation again. A state
    that skips past the target, or hits it with the wrong permutation,
    raises InductionTargetError; a length tie along the way propagates as
    a connection error.
    """
    _require_symmetric3(t)
    target = max(t.lengths[0], t.lengths[2])
    current = t
    moves: list = []
    matrix = VisitationMatrix.identity(3)
    while True:
        if len(moves) >= cap:
            raise CapExceededError(
                f"no return to total length {target} within {cap} steps"
            )
        step = rv_step(current)
        current = step.map
        moves.append(step.move)
        matrix = matrix @ step.matrix
        if current.total == target:
            if current.perm != SYMMETRIC_3:
                raise InductionTargetError(
                    f"reached target length with permutation {current.perm}"
                )
            break
        if current.total < target:
            raise InductionTargetError(
                f"total length skipped past {target} at step {len(moves)}"
            )
    result = VeechStep(start=t, map=current, moves=tuple(moves), matrix=matrix)
    assert matrix.apply(current.lengths) == t.lengths
    return result


def return_time_identity(result: VeechStep) -> bool:
    """Whether the middle return time is one less than the outer two summed."""
    a1, a2, a3 = result.sums
    return a2 + 1 == a1 + a3


def block_path(kind: str, repeats: int) -> RauzyPath:
    """Loop word of one move family around the reversing permutation.

    kind 'aba' is a, then repeats b's, then a; 'bab' swaps the roles.
    Both words return to the base permutation for every repeats >= 0.
    """
    if repeats < 0:
        raise ValueError("repeats must be nonnegative")
    if kind == "aba":
        outer, inner = RauzyMove.A, RauzyMove.B
    elif kind == "bab":
        outer, inner = RauzyMove.B, RauzyMove.A
    else:
        raise ValueError(f"unknown block kind {kind!r}")
    moves = (outer,) + (inner,) * repeats + (outer,)
    path = RauzyPath(SYMMETRIC_3, moves)
    assert path.is_loop()
    return path


def closed_path_sums(kind: str, repeats: int) -> tuple:
    """Column sums of the block loop's matrix.

    The 'aba' family gives (repeats+1, repeats+2, 2) and 'bab' mirrors it.
    """
    return block_path(kind, repeats).matrix().column_sums()


def invariant_density(lengths) -> Rational:
    """Density value of the absolutely continuous invariant measure.

    Defined for unit-total length vectors; the formula has poles when an
    outer length equals 1, which cannot occur for positive vectors but is
    guarded against to fail loudly on malformed input.
    """
    values = tuple(rational(v) for v in lengths)
    if len(values) != 3:
        raise ValueError("expected exactly three lengths")
    if sum(values) != 1:
        raise ValueError(f"lengths must sum to 1, got total {sum(values)}")
    l1, l2, l3 = values
    if l1 == 1 or l3 == 1:
        raise ValueError("density pole: an outer length equals 1")
    if any(v <= 0 for v in values):
        raise ValueError(f"lengths must be positive, got {values}")
    return (1 / (1 - l1) + 1 / (1 - l3)) / ((l1 + l2) * (l2 + l3))


def brute_force_return_times(t: Iet, cap: int = DEFAULT_ORBIT_CAP) -> tuple:
    """First-return times to [0, max(lambda_1, lambda_3)) piece by piece.

    Derives the continuity pieces of the return map by pulling the window
    boundaries backward, then confirms each piece's return time by orbit
    simulation at three interior sample points. Returns the times in
    domain order; a state compatible with veech_step yields three.
    """
    _require_symmetric3(t)
    window = max(t.lengths[0], t.lengths[2])
    pieces = t.return_time_pieces(window, cap)
    for lo, hi, shift, steps in pieces:
        width = hi - lo
        for f in (Fraction(1, 7), Fraction(1, 2), Fraction(6, 7)):
            x = lo + width * f
            n, y = t.first_return(x, window, cap)
            assert n == steps and y == x + shift, (
                f"orbit of {x} disagrees with derived return piece"
            )
    return tuple(p[3] for p in pieces)
