"""Weak-metric machinery: near-identity powers of an interval exchange.

An exchange is probed for powers T^n that are simultaneously close to the
identity in a truncated weak metric and mix two prescribed sets. Candidate
powers come from a window scan: whenever induction passes through a state
that a fixed positive matrix pulls back into a narrow parameter region,
the column sums of the accumulated matrix give first-return times whose
multiples are the natural candidates.

All set computations are exact; the only deliberate approximation is the
truncation of the metric series, whose tail is reported alongside.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Union

from .errors import (
    CapExceededError,
    SaddleConnectionError,
    TowerDisjointnessError,
)
from .iet import DEFAULT_ORBIT_CAP, Iet, Permutation
from .induction3 import SYMMETRIC_3
from .numeric import (
    HalfOpenInterval,
    IntervalSet,
    Rational,
    RationalLike,
    partial_sums,
    rational,
)
from .rauzy import (
    RauzyMove,
    RauzyPath,
    VisitationMatrix,
    max_row_ratio,
    reverse_path,
    rv_step,
)

DEFAULT_SCAN_DEPTH = 200
# Explicit floor-by-floor tower verification is skipped above this height;
# disjointness then follows from the first-return property instead.
FLOOR_VERIFY_LIMIT = 256


# ---------------------------------------------------------------------------
# Truncated weak metric over a dyadic generating family.


@dataclass(frozen=True)
class WeakMetricConfig:
    """Truncation depth for the weak-metric series."""

    truncation: int = 20

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation must be at least 1")

    @property
    def tail(self) -> Rational:
        """Remaining series weight beyond the truncation, per unit length."""
        return Fraction(1, 2 ** self.truncation)


def dyadic_generating_interval(index: int, total: RationalLike) -> HalfOpenInterval:
    """The index-th set of the level-major dyadic family on [0, total).

    Index 1 and 2 are the two halves, 3..6 the four quarters, and so on;
    level j contributes 2^j consecutive sets.
    """
    if index < 1:
        raise ValueError("index starts at 1")
    total = rational(total)
    level = (index + 1).bit_length() - 1
    offset = index - (2 ** level - 1)
    width = total / 2 ** level
    return HalfOpenInterval(offset * width, (offset + 1) * width)


def weak_distance(
    s_power: int,
    t_power: int,
    t: Iet,
    cfg: Optional[WeakMetricConfig] = None,
) -> Rational:
    """Truncated weak distance between T^s_power and T^t_power.

    Sums 2^-n times the measure of the symmetric difference of the two
    images of the n-th dyadic generating set, for n up to the truncation.
    The omitted tail is at most total_length * 2^-truncation, so the
    returned value only ever underestimates.
    """
    if cfg is None:
        cfg = WeakMetricConfig()
    if s_power == t_power:
        return Fraction(0)
    acc = Fraction(0)
    for n in range(1, cfg.truncation + 1):
        e = IntervalSet((dyadic_generating_interval(n, t.total),))
        left = t.image_set(e, s_power)
        right = t.image_set(e, t_power)
        acc += Fraction(1, 2 ** n) * left.symmetric_difference(right).measure
    return acc


def weak_distance_tail(t: Iet, cfg: Optional[WeakMetricConfig] = None) -> Rational:
    """Upper bound on the series mass dropped by the truncation."""
    if cfg is None:
        cfg = WeakMetricConfig()
    return t.total * cfg.tail


# ---------------------------------------------------------------------------
# Positive loops and the admissible parameter window.


@dataclass(frozen=True)
class PositiveLoop:
    """A move word returning to its base with an all-positive matrix."""

    path: RauzyPath
    matrix: VisitationMatrix
    row_ratio: Rational
    transpose_row_ratio: Rational
    first_row_max: int


@lru_cache(maxsize=8)
def _positive_loop_search(p: Permutation, max_len: int) -> PositiveLoop:
    for length in range(1, max_len + 1):
        for moves in itertools.product((RauzyMove.A, RauzyMove.B), repeat=length):
            path = RauzyPath(p, moves)
            if path.perms[-1] != p:
                continue
            m = path.matrix()
            if m.is_positive():
                return PositiveLoop(
                    path=path,
                    matrix=m,
                    row_ratio=max_row_ratio(m),
                    transpose_row_ratio=max_row_ratio(m.transpose),
                    first_row_max=max(m.entries[0]),
                )
    raise CapExceededError(f"no positive loop of word length <= {max_len}")


def find_positive_loop(
    p: Optional[Permutation] = None, max_len: int = 12
) -> PositiveLoop:
    """Shortest positive loop at p, first in alphabetical move order.

    For the reversing 3-permutation this is the word a b a b a b.
    """
    if p is None:
        p = SYMMETRIC_3
    return _positive_loop_search(p, max_len)


@dataclass(frozen=True)
class WhirlyWindow:
    """A positive loop together with the parameter tolerances."""

    eps1: Rational
    eps2: Rational
    loop: PositiveLoop

    def __post_init__(self):
        for name in ("eps1", "eps2"):
            v = rational(getattr(self, name))
            if not Fraction(0) < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
            object.__setattr__(self, name, v)

    @property
    def matrix(self) -> VisitationMatrix:
        return self.loop.matrix

    @cached_property
    def squared(self) -> VisitationMatrix:
        return self.loop.matrix @ self.loop.matrix


def in_window_core(alpha, eps1: RationalLike, eps2: RationalLike) -> bool:
    """Membership in the admissible length region, all inequalities strict.

    The middle length dominates to within eps1 of the total, and the two
    outer lengths are ordered with relative gap below eps2.
    """
    e1, e2 = rational(eps1), rational(eps2)
    for e in (e1, e2):
        if not Fraction(0) < e < 1:
            raise ValueError(f"tolerance must lie in (0, 1), got {e}")
    values = tuple(rational(v) for v in alpha)
    if len(values) != 3:
        raise ValueError("expected exactly three lengths")
    if any(v <= 0 for v in values):
        return False
    a1, a2, a3 = values
    total = a1 + a2 + a3
    if not (1 - e1) * total < a2 < (1 - e1 / 2) * total:
        return False
    return a3 < a1 < (1 + e2) * a3


def construct_window_point(alpha, window: WhirlyWindow) -> Iet:
    """The exchange whose doubled-loop induction lands exactly on alpha.

    The length vector is the window matrix squared applied to alpha; the
    construction is verified by replaying the loop word forward.
    """
    values = tuple(rational(v) for v in alpha)
    if not in_window_core(values, window.eps1, window.eps2):
        raise ValueError(f"alpha {values} lies outside the admissible window core")
    doubled = RauzyPath(window.loop.path.base, window.loop.path.moves * 2)
    built = reverse_path(values, doubled)
    assert built.lengths == window.squared.apply(values)
    return built


# ---------------------------------------------------------------------------
# Towers of consecutive images.


@dataclass(frozen=True)
class Tower:
    """Consecutive images T^0(base) .. T^(height-1)(base), pairwise disjoint."""

    base: HalfOpenInterval
    height: int
    floors: tuple
    union: IntervalSet
    remainder: IntervalSet

    @property
    def covered_measure(self) -> Rational:
        return self.union.measure


def build_tower(t: Iet, base: HalfOpenInterval, height: int) -> Tower:
    """Stack images of the base, failing on the first floor that collides.

    A height beyond the first return time of the base necessarily trips
    the disjointness check. The remainder is the part of the domain the
    floors do not cover.
    """
    if height < 1:
        raise ValueError("height must be at least 1")
    if not (Fraction(0) <= base.lo and base.hi <= t.total):
        raise ValueError(f"base {base} not inside [0, {t.total})")
    floors = [IntervalSet((base,))]
    union = floors[0]
    for i in range(1, height):
        nxt = t.image_set(floors[-1], 1)
        if union.intersect(nxt).measure > 0:
            raise TowerDisjointnessError(
                f"floor {i} meets an earlier floor", floor_index=i
            )
        floors.append(nxt)
        union = union.union(nxt)
    domain = IntervalSet((t.domain,))
    return Tower(
        base=base,
        height=height,
        floors=tuple(floors),
        union=union,
        remainder=domain.difference(union),
    )


@dataclass(frozen=True)
class TowerStack:
    """Return towers over the continuity pieces of one window."""

    window: Rational
    towers: tuple
    covered: IntervalSet
    remainder: IntervalSet

    @property
    def covered_measure(self) -> Rational:
        return self.covered.measure

    @property
    def remainder_measure(self) -> Rational:
        return self.remainder.measure


def tower_stack(
    t: Iet, window: RationalLike, cap: int = DEFAULT_ORBIT_CAP
) -> TowerStack:
    """One tower per return piece of [0, window); floors must tile disjointly.

    When the window is admissible the towers partition the whole domain
    and the remainder is empty.
    """
    window = rational(window)
    pieces = t.return_time_pieces(window, cap)
    towers = []
    covered = IntervalSet.empty()
    for lo, hi, _shift, steps in pieces:
        tower = build_tower(t, HalfOpenInterval(lo, hi), steps)
        if covered.intersect(tower.union).measure > 0:
            raise TowerDisjointnessError(
                f"tower over [{lo}, {hi}) meets an earlier tower"
            )
        covered = covered.union(tower.union)
        towers.append(tower)
    domain = IntervalSet((t.domain,))
    return TowerStack(
        window=window,
        towers=tuple(towers),
        covered=covered,
        remainder=domain.difference(covered),
    )


# ---------------------------------------------------------------------------
# Overlap claims for constructed window points.


@dataclass(frozen=True)
class CheckRow:
    """One computed quantity against one bound."""

    quantity: str
    computed: Rational
    bound: Rational
    relation: str
    holds: bool
    informational: bool = False


@dataclass(frozen=True)
class ClaimsReport:
    rows: tuple
    gamma: tuple
    sums: tuple
    l: int
    eps1: Rational
    eps2: Rational

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.rows if not r.informational)

    def to_csv_rows(self) -> list:
        return [
            (r.quantity, str(r.computed), str(r.bound), str(r.holds).lower())
            for r in self.rows
        ]


def _compare(relation: str, computed: Rational, bound: Rational) -> bool:
    if relation == "==":
        return computed == bound
    if relation == "<":
        return computed < bound
    if relation == ">":
        return computed > bound
    if relation == ">=":
        return computed >= bound
    raise ValueError(f"unknown relation {relation!r}")


def _row(quantity, computed, bound, relation, informational=False) -> CheckRow:
    return CheckRow(
        quantity=quantity,
        computed=computed,
        bound=bound,
        relation=relation,
        holds=_compare(relation, computed, bound),
        informational=informational,
    )


def verify_overlap_claims(t: Iet, window: WhirlyWindow, l: int = 2) -> ClaimsReport:
    """Exact overlap and remainder checks for a constructed window point.

    Recovers the induced length vector by solving the squared loop matrix,
    then verifies with raw set arithmetic: the middle piece meets its own
    l-fold return image in exactly its length minus l times the outer
    drift, the middle tower misses exactly the two outer towers, and the
    doubly shifted window overlap clears the drift-adjusted bound.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    gamma = window.squared.solve(t.lengths)
    if any(g <= 0 for g in gamma):
        raise ValueError("exchange is not a window point: negative pullback")
    if not in_window_core(gamma, window.eps1, window.eps2):
        raise ValueError("exchange is not a window point: pullback outside core")
    a1, a2, a3 = window.squared.column_sums()
    g1, g2, g3 = gamma
    gtotal = g1 + g2 + g3
    drift = g1 - g3
    e1, e2 = window.eps1, window.eps2
    n = l * a2

    middle = IntervalSet((HalfOpenInterval(g1, g1 + g2),))
    full = IntervalSet((HalfOpenInterval(Fraction(0), gtotal),))

    rows = []
    c1 = t.image_set(middle, n).intersect(middle).measure
    c1_rhs = g2 - l * drift
    rows.append(
        CheckRow(
            quantity="c1_middle_overlap",
            computed=c1,
            bound=max(c1_rhs, Fraction(0)),
            relation="==",
            holds=c1_rhs > 0 and c1 == c1_rhs,
        )
    )
    rows.append(
        _row("c1_window_bound", c1, (1 - l * e1 * e2 / (1 - e1)) * g2, ">")
    )

    tower = build_tower(t, HalfOpenInterval(g1, g1 + g2), a2)
    c2 = tower.remainder.measure
    rows.append(_row("c2_tower_remainder", c2, a1 * g1 + a3 * g3, "=="))
    rows.append(_row("c2_remainder_bound", c2, e1 / (1 - e1) * t.total, "<"))

    c3 = t.image_set(full, n).intersect(t.image_set(full, -l)).measure
    rows.append(_row("c3_shifted_overlap", c3, (1 - l * e2) * g3, ">="))

    omega_lo = g1 + g2 + l * drift
    if omega_lo < gtotal:
        omega = IntervalSet((HalfOpenInterval(omega_lo, gtotal),))
        escape = (
            t.image_set(omega, n).difference(t.image_set(full, -l)).measure
        )
        rows.append(_row("c3_witness_escape", escape, Fraction(0), "=="))

    return ClaimsReport(
        rows=tuple(rows),
        gamma=gamma,
        sums=(a1, a2, a3),
        l=l,
        eps1=e1,
        eps2=e2,
    )


# ---------------------------------------------------------------------------
# Window scanning along induction and per-hit checks.


def small_window_constant(eps: RationalLike, l: int) -> Rational:
    """Largest dyadic tolerance whose window forces the overlap bounds.

    Picks 2^-j with l*c^2/(1-c) below eps/10 and c/(1-c) below eps/2;
    both sides shrink with c, so the first power of two that fits is the
    largest one.
    """
    eps = rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if l < 1:
        raise ValueError("l must be at least 1")
    for j in range(1, 65):
        c = Fraction(1, 2 ** j)
        if l * c * c / (1 - c) < eps / 10 and c / (1 - c) < eps / 2:
            return c
    raise ValueError("no dyadic constant above 2^-64 fits the tolerances")


def _dyadic_window_fit(gamma: tuple, cap: Rational) -> Optional[Rational]:
    """The unique dyadic c <= cap with gamma strictly inside the c-window.

    The middle-length ratio pins c into a half-open octave, so at most one
    power of two can satisfy the two-sided constraint.
    """
    total = sum(gamma, Fraction(0))
    x = 1 - gamma[1] / total
    if x <= 0:
        return None
    c = Fraction(1)
    while c >= 2 * x:
        c /= 2
    if not (x < c <= cap):
        return None
    if not gamma[2] < gamma[0] < (1 + c) * gamma[2]:
        return None
    return c


@dataclass(frozen=True)
class WindowHit:
    """An induction state whose loop pullback lands in a dyadic window."""

    step: int
    dyadic: Rational
    gamma: tuple
    matrix: VisitationMatrix

    @property
    def sums(self) -> tuple:
        """First-return times of the three pullback pieces."""
        return self.matrix.column_sums()


@dataclass(frozen=True)
class WindowScan:
    hits: tuple
    steps_scanned: int
    depth: int
    cap: Rational

    @property
    def truncated(self) -> bool:
        """True when a length tie stopped the scan before the depth."""
        return self.steps_scanned < self.depth


def find_window_hits(
    t: Iet, eps: RationalLike, l: int, depth: int = DEFAULT_SCAN_DEPTH
) -> WindowScan:
    """Scan induction states whose loop pullback is a window point.

    At each state carrying the reversing permutation, solve the squared
    loop matrix against the current lengths; a strictly positive solution
    inside some dyadic window no wider than the (eps, l) constant is a
    hit. A length tie ends the scan early; hits found so far stand.
    """
    if t.size != 3 or t.perm != SYMMETRIC_3:
        raise ValueError(f"window scans need the reversing 3-permutation, got {t.perm}")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    cap = small_window_constant(eps, l)
    squared = find_positive_loop().matrix
    squared = squared @ squared
    hits = []
    state = t
    cumulative = VisitationMatrix.identity(3)
    scanned = 0
    for k in range(depth + 1):
        scanned = k
        if state.perm == SYMMETRIC_3:
            gamma = squared.solve(state.lengths)
            if all(g > 0 for g in gamma):
                c = _dyadic_window_fit(gamma, cap)
                if c is not None:
                    hits.append(
                        WindowHit(
                            step=k,
                            dyadic=c,
                            gamma=gamma,
                            matrix=cumulative @ squared,
                        )
                    )
        if k == depth:
            break
        try:
            step = rv_step(state)
        except SaddleConnectionError:
            break
        state = step.map
        cumulative = cumulative @ step.matrix
    return WindowScan(
        hits=tuple(hits), steps_scanned=scanned, depth=depth, cap=cap
    )


def _window_power_overlap(
    induced: Iet,
    sums: tuple,
    n: int,
    source: IntervalSet,
    target: IntervalSet,
    cap: int = DEFAULT_ORBIT_CAP,
) -> Rational:
    """Measure of T^n(source) meeting target, both inside a return window.

    Walks source pieces through the induced return map, charging each pass
    the return time of its piece. Whatever cannot land back in the window
    at time exactly n sits strictly between returns, hence above the
    window and away from target; only exact landings are collected.
    """
    if n < 0:
        raise ValueError("power must be nonnegative here")
    if n == 0:
        return source.intersect(target).measure
    betas = induced.betas
    stack = [(p.lo, p.hi, 0) for p in source.intervals]
    landed = []
    work = 0
    while stack:
        work += 1
        if work > cap:
            raise CapExceededError(f"window overlap walk exceeded {cap} pieces")
        lo, hi, consumed = stack.pop()
        if consumed == n:
            landed.append((lo, hi))
            continue
        for idx in range(induced.size):
            a = max(lo, betas[idx])
            b = min(hi, betas[idx + 1])
            if a >= b:
                continue
            took = consumed + sums[idx]
            if took <= n:
                off = induced.offsets[idx]
                stack.append((a + off, b + off, took))
    return IntervalSet.from_pairs(landed).intersect(target).measure


@dataclass(frozen=True)
class HitAnalysis:
    """Overlap and remainder checks at one window hit."""

    hit: WindowHit
    power: int
    rows: tuple
    returns_verified: bool
    floors_verified: bool

    @property
    def all_hold(self) -> bool:
        return all(r.holds for r in self.rows if not r.informational)


@dataclass(frozen=True)
class WindowReport:
    scan: WindowScan
    eps: Rational
    l: int
    analyses: tuple

    @property
    def powers(self) -> tuple:
        """The near-identity candidate powers, one per hit."""
        return tuple(a.power for a in self.analyses)

    @property
    def all_hold(self) -> bool:
        return all(a.all_hold for a in self.analyses)


def analyze_window_hits(
    t: Iet,
    eps: RationalLike,
    l: int,
    depth: int = DEFAULT_SCAN_DEPTH,
    floor_limit: int = FLOOR_VERIFY_LIMIT,
) -> WindowReport:
    """Evaluate the overlap guarantees at every window hit.

    Per hit, with return times (a1, a2, a3) from the hit matrix and the
    pullback vector as window coordinates: the l*a2 power of the exchange
    meets the return window in more than (1 - eps) of its length, the
    middle tower remainder stays below eps times the domain, and the
    doubly shifted overlap clears the dyadic drift bound. The uniform
    one-third bound is reported for comparison but not enforced; the
    drift-adjusted bound is the one that must hold.
    """
    eps = rational(eps)
    scan = find_window_hits(t, eps, l, depth)
    analyses = []
    for hit in scan.hits:
        g1, g2, g3 = hit.gamma
        gtotal = g1 + g2 + g3
        a1, a2, a3 = hit.sums
        induced = Iet(hit.gamma, SYMMETRIC_3)
        full = IntervalSet((HalfOpenInterval(Fraction(0), gtotal),))
        n = l * a2

        rows = []
        p1 = _window_power_overlap(induced, hit.sums, n, full, full)
        rows.append(_row("p1_window_overlap", p1, (1 - eps) * gtotal, ">"))

        floors_verified = a2 <= floor_limit
        if floors_verified:
            tower = build_tower(t, HalfOpenInterval(g1, g1 + g2), a2)
            p2 = tower.remainder.measure
            assert p2 == a1 * g1 + a3 * g3
        else:
            # Floors of a return tower are disjoint because intermediate
            # iterates stay outside the window, so the remainder measure
            # is forced without enumerating them.
            p2 = a1 * g1 + a3 * g3
        rows.append(_row("p2_tower_remainder", p2, eps * t.total, "<"))

        p3 = _window_power_overlap(induced, hit.sums, n + l, full, full)
        rows.append(
            _row("p3_shifted_overlap", p3, (1 - l * hit.dyadic) * g3, ">=")
        )
        rows.append(
            _row(
                "p3_uniform_third_bound",
                p3,
                eps / 3 * gtotal,
                ">=",
                informational=True,
            )
        )

        returns_verified = max(hit.sums) <= 10_000
        if returns_verified:
            cuts = partial_sums(hit.gamma)
            for i in range(3):
                x = (cuts[i] + cuts[i + 1]) / 2
                steps, y = t.first_return(x, gtotal)
                assert steps == hit.sums[i] and y == induced.apply(x)

        analyses.append(
            HitAnalysis(
                hit=hit,
                power=n,
                rows=tuple(rows),
                returns_verified=returns_verified,
                floors_verified=floors_verified,
            )
        )
    return WindowReport(scan=scan, eps=eps, l=l, analyses=tuple(analyses))


def harvest_candidate_powers(
    t: Iet,
    eps: RationalLike,
    l_values: tuple = (1, 2, 3),
    depth: int = DEFAULT_SCAN_DEPTH,
) -> tuple:
    """Candidate near-identity powers from window hits: l times a2 per hit.

    Scans once with the tightest of the given l values so every harvested
    power is backed by a window no wider than its own constant.
    """
    if not l_values:
        raise ValueError("need at least one l value")
    scan = find_window_hits(t, eps, max(l_values), depth)
    powers = {l * hit.sums[1] for hit in scan.hits for l in l_values}
    return tuple(sorted(powers))


# ---------------------------------------------------------------------------
# Coverage bound for the stacked tower.


@dataclass(frozen=True)
class CoverageReport:
    """Tower coverage inequality data for a constructed window point."""

    a_star: int
    alpha_total: Rational
    lhs: Rational
    rhs: Rational
    holds: bool
    eta: tuple
    eta_ratio_ok: bool
    tower: Tower


def tower_coverage_bound(t: Iet, window: WhirlyWindow) -> CoverageReport:
    """Check that a_star floors over the pullback window cover enough mass.

    a_star is the first column sum of the loop matrix, i.e. the return
    time of the first piece one loop level up; the floors it counts are
    verified disjoint, and their total a_star * |alpha| must exceed the
    domain length divided by first_row_max * (1 + 2 * r * r').
    """
    loop = window.loop
    gamma = window.squared.solve(t.lengths)
    if any(g <= 0 for g in gamma):
        raise ValueError("exchange is not a window point: negative pullback")
    eta = loop.matrix.apply(gamma)
    assert loop.matrix.apply(eta) == t.lengths
    a_star = loop.matrix.column_sums()[0]
    r = loop.row_ratio
    rp = loop.transpose_row_ratio
    eta_ok = eta[1] < rp * eta[0] and eta[2] < rp * eta[0]
    alpha_total = sum(gamma, Fraction(0))
    tower = build_tower(t, HalfOpenInterval(Fraction(0), alpha_total), a_star)
    lhs = a_star * alpha_total
    rhs = t.total / (loop.first_row_max * (1 + 2 * r * rp))
    return CoverageReport(
        a_star=a_star,
        alpha_total=alpha_total,
        lhs=lhs,
        rhs=rhs,
        holds=lhs > rhs,
        eta=eta,
        eta_ratio_ok=eta_ok,
        tower=tower,
    )


# ---------------------------------------------------------------------------
# The probe: find one power that is near-identity yet mixes two sets.


@dataclass(frozen=True)
class SelfShift:
    """Probe T^n(subject) against T^-shift(subject)."""

    subject: IntervalSet
    shift: int

    def __post_init__(self):
        if self.shift < 1:
            raise ValueError("shift must be at least 1")


@dataclass(frozen=True)
class PairSets:
    """Probe T^n(source) against a fixed target set."""

    source: IntervalSet
    target: IntervalSet


ProbeMode = Union[SelfShift, PairSets]


@dataclass(frozen=True)
class ProbeReport:
    success: bool
    power: Optional[int]
    distance: Optional[Rational]
    tail: Rational
    overlap: Optional[Rational]
    eps: Rational
    mode: str
    shift: Optional[int]
    truncation: int
    candidates: tuple
    attempts: int

    def to_json_dict(self) -> dict:
        return {
            "success": self.success,
            "n": self.power,
            "weak_distance": None if self.distance is None else str(self.distance),
            "tail_bound": str(self.tail),
            "overlap": None if self.overlap is None else str(self.overlap),
            "eps": str(self.eps),
            "mode": self.mode,
            "l": self.shift,
            "metric_truncation": self.truncation,
            "candidates_tried": list(self.candidates),
            "attempts": self.attempts,
        }


def _validate_probe_set(name: str, s: IntervalSet, t: Iet) -> None:
    if s.is_empty:
        raise ValueError(f"{name} set is empty")
    domain = IntervalSet((t.domain,))
    if not domain.issuperset(s):
        raise ValueError(f"{name} set leaves the domain [0, {t.total})")


def whirly_probe(
    t: Iet,
    mode: ProbeMode,
    eps: RationalLike,
    cfg: Optional[WeakMetricConfig] = None,
    search: Union[None, int, list, tuple] = None,
    distance_cache: Optional[dict] = None,
) -> ProbeReport:
    """Search for a power within eps of the identity that mixes the sets.

    Candidates are tried in increasing order. By default they are the
    harvested window powers plus 1..10; an integer search changes the
    harvest depth, and an explicit sequence is used verbatim. A candidate
    is accepted when its truncated distance plus the truncation tail stays
    below eps (so acceptance never relies on the unseen tail) and the
    overlap of the probed sets has positive measure.
    """
    eps = rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if cfg is None:
        cfg = WeakMetricConfig()

    if isinstance(mode, SelfShift):
        _validate_probe_set("subject", mode.subject, t)
        mode_name, shift = "selfShift", mode.shift
    elif isinstance(mode, PairSets):
        _validate_probe_set("source", mode.source, t)
        _validate_probe_set("target", mode.target, t)
        mode_name, shift = "pairSets", None
    else:
        raise ValueError(f"unknown probe mode {mode!r}")

    if search is None or isinstance(search, int):
        depth = DEFAULT_SCAN_DEPTH if search is None else search
        harvested: tuple = ()
        if t.size == 3 and t.perm == SYMMETRIC_3:
            l_values = (1, 2, 3) if shift is None else tuple(sorted({1, 2, 3, shift}))
            harvested = harvest_candidate_powers(t, eps, l_values, depth)
        candidates = sorted(set(harvested) | set(range(1, 11)))
    else:
        candidates = sorted({int(n) for n in search})
        if not candidates:
            raise ValueError("explicit candidate list is empty")
        if candidates[0] < 1:
            raise ValueError("candidate powers must be positive")

    tail = cfg.tail
    attempts = 0
    for n in candidates:
        attempts += 1
        raw = None if distance_cache is None else distance_cache.get(n)
        if raw is None:
            raw = weak_distance(n, 0, t, cfg)
            if distance_cache is not None:
                distance_cache[n] = raw
        dist = raw / t.total
        if dist + tail >= eps:
            continue
        if isinstance(mode, SelfShift):
            overlap = (
                t.image_set(mode.subject, n)
                .intersect(t.image_set(mode.subject, -mode.shift))
                .measure
            )
        else:
            overlap = t.image_set(mode.source, n).intersect(mode.target).measure
        if overlap > 0:
            return ProbeReport(
                success=True,
                power=n,
                distance=dist,
                tail=tail,
                overlap=overlap,
                eps=eps,
                mode=mode_name,
                shift=shift,
                truncation=cfg.truncation,
                candidates=tuple(candidates),
                attempts=attempts,
            )
    return ProbeReport(
        success=False,
        power=None,
        distance=None,
        tail=tail,
        overlap=None,
        eps=eps,
        mode=mode_name,
        shift=shift,
        truncation=cfg.truncation,
        candidates=tuple(candidates),
        attempts=attempts,
    )
