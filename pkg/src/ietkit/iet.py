"""Interval exchange transformations with exact rational arithmetic.

An exchange map is stored as positive interval lengths plus a 1-based
permutation of their order. All orbit computations are exact; powers of
the map are manipulated as piecewise-translation structures so that large
exponents cost O(log n) compositions instead of n point applications.
"""

from __future__ import annotations

import enum
import warnings
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Sequence

from .errors import CapExceededError
from .numeric import (
    HalfOpenInterval,
    IntervalSet,
    Rational,
    RationalLike,
    partial_sums,
    rational,
)

DEFAULT_ORBIT_CAP = 100_000
DEFAULT_POWER_CAP = 100_000


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..m} in one-line notation, values 1-based."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        if len(images) < 1:
            raise ValueError("need at least one symbol")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")

    @classmethod
    def symmetric(cls, m: int) -> "Permutation":
        """The order-reversing permutation (m, m-1, ..., 1)."""
        return cls(tuple(range(m, 0, -1)))

    @classmethod
    def from_text(cls, text: str) -> "Permutation":
        """Parse '3,2,1', '3 2 1', or '(3,2,1)'."""
        cleaned = text.strip().strip("()[]").replace(",", " ")
        parts = cleaned.split()
        if not parts:
            raise ValueError(f"empty permutation text: {text!r}")
        return cls(tuple(int(p) for p in parts))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.size:
            raise ValueError(f"index {i} out of range 1..{self.size}")
        return self.images[i - 1]

    @cached_property
    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def is_irreducible(self) -> bool:
        """No proper prefix {1..k} maps onto {1..k}."""
        seen_max = 0
        for k, v in enumerate(self.images[:-1], start=1):
            seen_max = max(seen_max, v)
            if seen_max == k:
                return False
        return True

    def avoids_adjacent_successors(self) -> bool:
        """True when no j has images[j+1] == images[j] + 1.

        Maps satisfying this (together with irreducibility) form the
        standard non-degenerate class; exposed for callers, not used to
        gate any computation here.
        """
        return all(b != a + 1 for a, b in zip(self.images, self.images[1:]))

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.images) + ")"


# A translation piece: map x -> x + shift on [lo, hi).
Piece = tuple


def _merge_pieces(pieces: list) -> tuple:
    out: list = []
    for p in pieces:
        if out and out[-1][2] == p[2] and out[-1][1] == p[0]:
            out[-1] = (out[-1][0], p[1], p[2])
        else:
            out.append(p)
    return tuple(out)


def _compose_pieces(first: tuple, second: tuple) -> tuple:
    """Pieces of (second after first); both args sorted and tiling [0, L)."""
    sec_los = [p[0] for p in second]
    out: list = []
    for lo, hi, s in first:
        a = lo + s
        stop = hi + s
        idx = bisect_right(sec_los, a) - 1
        while a < stop:
            l2, h2, s2 = second[idx]
            b = min(stop, h2)
            out.append((a - s, b - s, s + s2))
            a = b
            idx += 1
    return _merge_pieces(out)


@lru_cache(maxsize=64)
def _pow2_pieces(t: "Iet", k: int, inverse: bool) -> tuple:
    if k == 0:
        base = t.inverse_map if inverse else t
        return base.translation_pieces()
    half = _pow2_pieces(t, k - 1, inverse)
    return _compose_pieces(half, half)


@dataclass(frozen=True)
class Iet:
    """An exchange of len(lengths) intervals on [0, sum(lengths))."""

    lengths: tuple
    perm: Permutation

    def __post_init__(self):
        lengths = tuple(rational(v) for v in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if isinstance(self.perm, (tuple, list)):
            object.__setattr__(self, "perm", Permutation(tuple(self.perm)))
        if len(lengths) != self.perm.size:
            raise ValueError("length vector and permutation sizes differ")
        if any(v <= 0 for v in lengths):
            raise ValueError(f"lengths must be positive, got {lengths}")
        if self.perm.size > 1 and not self.perm.is_irreducible():
            # Still a perfectly good map, so warn instead of rejecting.
            warnings.warn(
                "reducible permutation: the exchange splits into invariant blocks",
                stacklevel=2,
            )

    @classmethod
    def from_json_dict(cls, data: dict) -> "Iet":
        return cls(
            tuple(rational(v) for v in data["lambda"]),
            Permutation(tuple(data["pi"])),
        )

    def to_json_dict(self) -> dict:
        return {
            "lambda": [str(v) for v in self.lengths],
            "pi": list(self.perm.images),
        }

    @property
    def size(self) -> int:
        return len(self.lengths)

    @cached_property
    def total(self) -> Rational:
        return sum(self.lengths, Fraction(0))

    @cached_property
    def domain(self) -> HalfOpenInterval:
        return HalfOpenInterval(Fraction(0), self.total)

    @cached_property
    def betas(self) -> tuple:
        """Domain cut points: 0 = b_0 < b_1 < ... < b_m = total."""
        return partial_sums(self.lengths)

    @cached_property
    def image_lengths(self) -> tuple:
        inv = self.perm.inverse
        return tuple(self.lengths[inv(j) - 1] for j in range(1, self.size + 1))

    @cached_property
    def image_betas(self) -> tuple:
        return partial_sums(self.image_lengths)

    @cached_property
    def offsets(self) -> tuple:
        """Per-interval translation amounts: T(x) = x + offsets[i] on piece i."""
        return tuple(
            self.image_betas[self.perm(i + 1) - 1] - self.betas[i]
            for i in range(self.size)
        )

    @cached_property
    def inverse_map(self) -> "Iet":
        return Iet(self.image_lengths, self.perm.inverse)

    def domain_interval(self, i: int) -> HalfOpenInterval:
        """The i-th exchanged interval (1-based)."""
        return HalfOpenInterval(self.betas[i - 1], self.betas[i])

    def piece_index(self, x: RationalLike) -> int:
        """1-based index of the interval containing x."""
        x = rational(x)
        if not Fraction(0) <= x < self.total:
            raise ValueError(f"{x} outside domain [0, {self.total})")
        return bisect_right(self.betas, x)

    def apply(self, x: RationalLike) -> Rational:
        x = rational(x)
        i = self.piece_index(x)
        return x + self.offsets[i - 1]

    def apply_inverse(self, x: RationalLike) -> Rational:
        return self.inverse_map.apply(x)

    def orbit(self, x: RationalLike, n: int) -> list:
        """[x, T(x), ..., T^n(x)] (or inverse steps when n < 0)."""
        x = rational(x)
        step = self.apply if n >= 0 else self.apply_inverse
        out = [x]
        for _ in range(abs(n)):
            x = step(x)
            out.append(x)
        return out

    def translation_pieces(self) -> tuple:
        """((lo, hi, shift), ...) describing the map piece by piece."""
        return tuple(
            (self.betas[i], self.betas[i + 1], self.offsets[i])
            for i in range(self.size)
        )

    def power_pieces(self, n: int, cap: int = DEFAULT_POWER_CAP) -> tuple:
        """Piecewise-translation structure of T^n, built by binary powering."""
        if n == 0:
            return ((Fraction(0), self.total, Fraction(0)),)
        inverse = n < 0
        bits = abs(n)
        result: Optional[tuple] = None
        k = 0
        while bits:
            if bits & 1:
                part = _pow2_pieces(self, k, inverse)
                result = part if result is None else _compose_pieces(result, part)
                if len(result) > cap:
                    raise CapExceededError(
                        f"power structure for n={n} exceeded {cap} pieces"
                    )
            bits >>= 1
            k += 1
        assert result is not None
        return result

    def apply_power(self, x: RationalLike, n: int,
                    cap: int = DEFAULT_POWER_CAP) -> Rational:
        x = rational(x)
        pieces = self.power_pieces(n, cap)
        los = [p[0] for p in pieces]
        lo, hi, s = pieces[bisect_right(los, x) - 1]
        if not lo <= x < hi:
            raise ValueError(f"{x} outside domain [0, {self.total})")
        return x + s

    def image_set(self, s: IntervalSet, power: int = 1,
                  cap: int = DEFAULT_POWER_CAP) -> IntervalSet:
        """Exact image T^power(S) of a finite interval union."""
        pieces = self.power_pieces(power, cap)
        los = [p[0] for p in pieces]
        out = []
        for iv in s.intervals:
            if iv.lo < 0 or iv.hi > self.total:
                raise ValueError(f"{iv} not within [0, {self.total})")
            idx = bisect_right(los, iv.lo) - 1
            a = iv.lo
            while a < iv.hi:
                lo, hi, sh = pieces[idx]
                b = min(iv.hi, hi)
                out.append((a + sh, b + sh))
                a = b
                idx += 1
        return IntervalSet.from_pairs(out)

    def first_return(self, x: RationalLike, window: RationalLike,
                     cap: int = DEFAULT_ORBIT_CAP) -> tuple:
        """First n >= 1 with T^n(x) back in [0, window), plus the landing point."""
        x = rational(x)
        window = rational(window)
        if not Fraction(0) < window <= self.total:
            raise ValueError(f"window must lie in (0, {self.total}]")
        if not Fraction(0) <= x < window:
            raise ValueError(f"{x} not in [0, {window})")
        y = x
        for n in range(1, cap + 1):
            y = self.apply(y)
            if y < window:
                return n, y
        raise CapExceededError(f"no return to [0, {window}) within {cap} steps")

    def return_time_pieces(self, window: RationalLike,
                           cap: int = DEFAULT_ORBIT_CAP) -> tuple:
        """Decompose [0, window) into maximal return pieces.

        Each result entry (lo, hi, shift, steps) means the first-return
        map to [0, window) acts on [lo, hi) as x -> x + shift, with
        constant return time ``steps``. Adjacent entries are merged only
        when both shift and return time agree. Implemented by pushing the
        window forward one application at a time, splitting at the map's
        own cut points and at the window boundary; no induction matrices
        are involved.
        """
        window = rational(window)
        if not Fraction(0) < window <= self.total:
            raise ValueError(f"window must lie in (0, {self.total}]")
        active = [(Fraction(0), window, Fraction(0), 0)]
        done: list = []
        work = 0
        while active:
            lo, hi, shift, steps = active.pop()
            work += 1
            if work > cap:
                raise CapExceededError(
                    f"return decomposition for [0, {window}) exceeded {cap} steps"
                )
            # Split the current image [lo+shift, hi+shift) at the map's cuts.
            a = lo + shift
            stop = hi + shift
            idx = bisect_right(self.betas, a) - 1
            while a < stop:
                piece_hi = self.betas[idx + 1]
                b = min(stop, piece_hi)
                sh = shift + self.offsets[idx]
                img_lo, img_hi = a + self.offsets[idx], b + self.offsets[idx]
                if img_lo < window:
                    cut = min(img_hi, window)
                    done.append((img_lo - sh, cut - sh, sh, steps + 1))
                if img_hi > window:
                    start = max(img_lo, window)
                    active.append((start - sh, img_hi - sh, sh, steps + 1))
                a = b
                idx += 1
        done.sort()
        # The pieces must tile [0, window) exactly.
        assert done and done[0][0] == 0 and done[-1][1] == window
        assert all(p[1] == q[0] for p, q in zip(done, done[1:]))
        merged: list = []
        for p in done:
            if merged and merged[-1][2:] == p[2:] and merged[-1][1] == p[0]:
                merged[-1] = (merged[-1][0], p[1], p[2], p[3])
            else:
                merged.append(p)
        return tuple(merged)

    def induced_map(self, window: RationalLike,
                    cap: int = DEFAULT_ORBIT_CAP) -> "InducedMap":
        """First-return map to [0, window), presented as an exchange map."""
        window = rational(window)
        pieces = self.return_time_pieces(window, cap)
        lengths = tuple(hi - lo for lo, hi, _, _ in pieces)
        image_order = sorted(range(len(pieces)), key=lambda i: pieces[i][0] + pieces[i][2])
        rank = [0] * len(pieces)
        for pos, i in enumerate(image_order, start=1):
            rank[i] = pos
        induced = Iet(lengths, Permutation(tuple(rank)))
        times = tuple(p[3] for p in pieces)
        return InducedMap(map=induced, return_times=times, window=window,
                          pieces=pieces)


@dataclass(frozen=True)
class InducedMap:
    """A first-return system: the induced exchange plus return times."""

    map: Iet
    return_times: tuple
    window: Rational
    pieces: tuple

    def to_json_dict(self) -> dict:
        return {
            "window": str(self.window),
            "map": self.map.to_json_dict(),
            "return_times": list(self.return_times),
        }


class Admissibility(str, enum.Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EndpointRep:
    """One candidate presentation of an interval endpoint.

    kind is 'zero' or 'total' for the domain boundary, 'orbit' for
    T^tau(beta_s) with s a cut-point index in 1..m-1.
    """

    kind: str
    s: Optional[int]
    tau: Optional[int]
    passes: bool


@dataclass(frozen=True)
class AdmissibilityReport:
    verdict: Admissibility
    xi_reps: tuple
    eta_reps: tuple
    bound: int

    def witnesses(self) -> tuple:
        left = next((r for r in self.xi_reps if r.passes), None)
        right = next((r for r in self.eta_reps if r.passes), None)
        return left, right


def _endpoint_reps(t: Iet, value: Rational, lo: Rational, hi: Rational,
                   bound: int) -> list:
    """All bounded presentations of ``value`` as a cut-point orbit element.

    A presentation T^tau(beta_s) passes when the connecting orbit segment
    avoids [lo, hi): indices 1..tau-1 for tau >= 0, indices 0..tau+1
    (including the cut point itself) for tau < 0.
    """
    reps = []
    for s in range(1, t.size):
        beta = t.betas[s]
        forward = [beta]
        y = beta
        for _ in range(bound):
            y = t.apply(y)
            forward.append(y)
        backward = [beta]
        y = beta
        for _ in range(bound):
            y = t.apply_inverse(y)
            backward.append(y)
        for tau in range(0, bound + 1):
            if forward[tau] == value:
                visits = forward[1:tau]
                passes = all(not lo <= v < hi for v in visits)
                reps.append(EndpointRep("orbit", s, tau, passes))
        for tau in range(-1, -bound - 1, -1):
            if backward[-tau] == value:
                visits = backward[0:-tau]
                passes = all(not lo <= v < hi for v in visits)
                reps.append(EndpointRep("orbit", s, tau, passes))
    return reps


def is_admissible(t: Iet, xi: RationalLike, eta: RationalLike,
                  bound: int = 50) -> AdmissibilityReport:
    """Bounded search for an admissible presentation of [xi, eta).

    Each endpoint needs a presentation by a cut-point orbit (or the domain
    boundary) whose connecting segment stays out of the interval itself.
    VERIFIED: both endpoints have a passing presentation. REFUTED: both
    endpoints have presentations within the search bound but no passing
    combination exists. UNKNOWN: some endpoint has no presentation within
    the bound, so nothing can be concluded at this depth.
    """
    xi, eta = rational(xi), rational(eta)
    if not Fraction(0) <= xi < eta <= t.total:
        raise ValueError(f"need 0 <= xi < eta <= {t.total}")
    xi_reps = _endpoint_reps(t, xi, xi, eta, bound)
    if xi == 0:
        xi_reps.insert(0, EndpointRep("zero", None, None, True))
    eta_reps = _endpoint_reps(t, eta, xi, eta, bound)
    if eta == t.total:
        eta_reps.insert(0, EndpointRep("total", None, None, True))
    if not xi_reps or not eta_reps:
        verdict = Admissibility.UNKNOWN
    elif any(r.passes for r in xi_reps) and any(r.passes for r in eta_reps):
        verdict = Admissibility.VERIFIED
    else:
        verdict = Admissibility.REFUTED
    return AdmissibilityReport(verdict=verdict, xi_reps=tuple(xi_reps),
                               eta_reps=tuple(eta_reps), bound=bound)
