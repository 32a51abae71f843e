"""Seeded random generators for exchanges, paths, and probe sets.

Everything takes an explicit random.Random so callers stay reproducible;
no module-level state.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .iet import Iet, Permutation
from .induction3 import SYMMETRIC_3
from .numeric import IntervalSet, rational
from .rauzy import RauzyMove, RauzyPath, VisitationMatrix, act, reverse_path


def random_path_to_base(rng: Random, max_len: int = 30) -> RauzyPath:
    """A random move word from the reversing base back to itself.

    Walks at most max_len - 1 random moves, then appends the unique
    closing move if the walk ends elsewhere in the class.
    """
    walk_len = rng.randint(4, max_len - 1)
    moves = []
    current = SYMMETRIC_3
    for _ in range(walk_len):
        move = rng.choice((RauzyMove.A, RauzyMove.B))
        moves.append(move)
        current = act(move, current)
    if current != SYMMETRIC_3:
        for move in (RauzyMove.A, RauzyMove.B):
            if act(move, current) == SYMMETRIC_3:
                moves.append(move)
                break
    path = RauzyPath(SYMMETRIC_3, tuple(moves))
    assert path.is_loop() and len(path.moves) <= max_len
    return path


def random_alpha(rng: Random, size: int = 3, denominator: int = 10 ** 6) -> tuple:
    """Strictly positive lengths in [1, 10] on a fixed denominator grid."""
    return tuple(
        Fraction(rng.randint(denominator, 10 * denominator), denominator)
        for _ in range(size)
    )


def random_reverse_instance(rng: Random, max_len: int = 30):
    """(path, alpha, exchange) with the exchange built by path reversal."""
    path = random_path_to_base(rng, max_len)
    alpha = random_alpha(rng)
    return path, alpha, reverse_path(alpha, path)


def random_window_alpha(rng: Random) -> tuple:
    """A unit-total vector inside the 1/100 window core.

    The outer mass s is kept strictly between 0.0051 and 0.0099 (skipping
    the exact dyadic 1/128 so the window fit below stays strict) and the
    outer drift is positive but tiny, so every sample also fits a dyadic
    window of half-width 1/64 or 1/128.
    """
    while True:
        s_num = rng.randint(51_000, 98_999)
        if s_num != 78_125:
            break
    s = Fraction(s_num, 10 ** 7)
    delta = Fraction(rng.randint(1, 99), 10 ** 9)
    a2 = 1 - s
    a1 = (s + delta) / 2
    a3 = (s - delta) / 2
    assert a3 > 0
    return (a1, a2, a3)


def random_iet(rng: Random, sizes: tuple = (2, 3, 4, 5)) -> Iet:
    """A random exchange with small-denominator lengths.

    The permutation is uniform over all of the symbols, so reducible ones
    occur and carry their construction warning.
    """
    m = rng.choice(sizes)
    lengths = tuple(Fraction(rng.randint(1, 24), 24) for _ in range(m))
    images = list(range(1, m + 1))
    rng.shuffle(images)
    return Iet(lengths, Permutation(tuple(images)))


def random_interval_set(rng: Random, total, max_parts: int = 3) -> IntervalSet:
    """A nonempty union of up to max_parts intervals inside [0, total)."""
    total = rational(total)
    parts = rng.randint(1, max_parts)
    cuts = sorted(rng.sample(range(97), 2 * parts))
    pairs = [
        (Fraction(cuts[2 * i], 97) * total, Fraction(cuts[2 * i + 1], 97) * total)
        for i in range(parts)
    ]
    out = IntervalSet.from_pairs(pairs)
    if out.is_empty:
        return random_interval_set(rng, total, max_parts)
    return out


def random_matrix_pair(rng: Random, size: int = 3):
    """(nonnegative-no-zero-row, strictly positive) matrix pair."""
    pos = VisitationMatrix(
        tuple(
            tuple(rng.randint(1, 9) for _ in range(size)) for _ in range(size)
        )
    )
    rows = []
    for _ in range(size):
        row = [rng.randint(0, 9) for _ in range(size)]
        if not any(row):
            row[rng.randrange(size)] = rng.randint(1, 9)
        rows.append(tuple(row))
    return VisitationMatrix(tuple(rows)), pos


def random_probe_pair(rng: Random, total, overlapping: bool = True):
    """(source, target) interval pair, sharing mass or far apart."""
    total = rational(total)
    unit = total / 200
    if overlapping:
        c = rng.randint(30, 170)
        w1 = rng.randint(4, 20)
        w2 = rng.randint(4, 20)
        e = IntervalSet.from_pairs([((c - w1) * unit, (c + w1) * unit)])
        f = IntervalSet.from_pairs([((c - w2) * unit, (c + w2) * unit)])
    else:
        lo1 = rng.randint(5, 30)
        lo2 = rng.randint(120, 170)
        e = IntervalSet.from_pairs([(lo1 * unit, (lo1 + rng.randint(4, 15)) * unit)])
        f = IntervalSet.from_pairs([(lo2 * unit, (lo2 + rng.randint(4, 15)) * unit)])
    return e, f
