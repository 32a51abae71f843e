"""Induction moves on exchange maps and their visitation matrices.

A single induction step compares the last interval against the one the
permutation sends last, cuts the longer by the shorter, and records the
cut in a unimodular integer matrix relating old lengths to new ones.
Iterating steps, walking the move graph of a permutation, and rebuilding
a start map from a move word all live here.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InconsistentPathError, SaddleConnectionError
from .iet import Iet, Permutation
from .numeric import Rational, rational


class RauzyMove(enum.Enum):
    A = "a"
    B = "b"

    @classmethod
    def from_text(cls, text: str) -> "RauzyMove":
        key = text.strip().lower()
        for move in cls:
            if move.value == key:
                return move
        raise ValueError(f"unknown move {text!r}, expected 'a' or 'b'")

    def __str__(self) -> str:
        return self.value


def act(move: RauzyMove, p: Permutation) -> Permutation:
    """Image of the permutation under one induction move."""
    m = p.size
    if m < 2:
        raise ValueError("induction moves need at least two intervals")
    if move is RauzyMove.A:
        k = p.inverse(m)
        images = list(p.images[:k])
        images.append(p(m))
        images.extend(p.images[k : m - 1])
        return Permutation(tuple(images))
    v = p(m)
    out = []
    for value in p.images:
        if value <= v:
            out.append(value)
        elif value == m:
            out.append(v + 1)
        else:
            out.append(value + 1)
    return Permutation(tuple(out))


def step_matrix(p: Permutation, move: RauzyMove) -> "VisitationMatrix":
    """Integer matrix A with old_lengths = A @ new_lengths for this move."""
    m = p.size
    k = p.inverse(m)
    rows = []
    if move is RauzyMove.A:
        for j in range(1, m + 1):
            row = [0] * m
            if j < k:
                row[j - 1] = 1
            elif j == k:
                row[k - 1] = 1
                row[k] = 1
            elif j < m:
                row[j] = 1
            else:
                row[k] = 1
            rows.append(tuple(row))
    else:
        for j in range(1, m + 1):
            row = [0] * m
            row[j - 1] = 1
            if j == m:
                row[k - 1] = 1
            rows.append(tuple(row))
    return VisitationMatrix(tuple(rows))


@dataclass(frozen=True)
class VisitationMatrix:
    """A square integer matrix with exact linear algebra helpers."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        m = len(rows)
        if m == 0 or any(len(row) != m for row in rows):
            raise ValueError("entries must form a nonempty square matrix")

    @classmethod
    def identity(cls, m: int) -> "VisitationMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(m))
                         for i in range(m)))

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple) -> int:
        i, j = ij
        return self.entries[i - 1][j - 1]

    def __matmul__(self, other: "VisitationMatrix") -> "VisitationMatrix":
        if self.size != other.size:
            raise ValueError("size mismatch")
        cols = list(zip(*other.entries))
        return VisitationMatrix(tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in self.entries
        ))

    def apply(self, vector: Sequence) -> tuple:
        if len(vector) != self.size:
            raise ValueError("size mismatch")
        vec = [rational(v) if not isinstance(v, Fraction) else v for v in vector]
        return tuple(sum((a * v for a, v in zip(row, vec)), Fraction(0))
                     for row in self.entries)

    @property
    def transpose(self) -> "VisitationMatrix":
        return VisitationMatrix(tuple(zip(*self.entries)))

    def column_sums(self) -> tuple:
        return tuple(sum(col) for col in zip(*self.entries))

    def row_sums(self) -> tuple:
        return tuple(sum(row) for row in self.entries)

    def is_positive(self) -> bool:
        return all(v > 0 for row in self.entries for v in row)

    def determinant(self) -> int:
        """Exact determinant by fraction-free elimination."""
        n = self.size
        mat = [list(row) for row in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if mat[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if mat[i][k] != 0), None)
                if pivot is None:
                    return 0
                mat[k], mat[pivot] = mat[pivot], mat[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    mat[i][j] = (mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j]) // prev
                mat[i][k] = 0
            prev = mat[k][k]
        return sign * mat[n - 1][n - 1]

    def solve(self, vector: Sequence) -> tuple:
        """Exact solution x of self @ x = vector; raises on singularity."""
        n = self.size
        if len(vector) != n:
            raise ValueError("size mismatch")
        aug = [[Fraction(v) for v in row] + [rational(vector[i])]
               for i, row in enumerate(self.entries)]
        for k in range(n):
            pivot = next((i for i in range(k, n) if aug[i][k] != 0), None)
            if pivot is None:
                raise ValueError("singular matrix")
            aug[k], aug[pivot] = aug[pivot], aug[k]
            pv = aug[k][k]
            aug[k] = [v / pv for v in aug[k]]
            for i in range(n):
                if i != k and aug[i][k] != 0:
                    factor = aug[i][k]
                    aug[i] = [v - factor * w for v, w in zip(aug[i], aug[k])]
        return tuple(row[n] for row in aug)

    def to_rows(self) -> list:
        return [list(row) for row in self.entries]

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(v) for v in row)
                               for row in self.entries) + "]"


def max_row_ratio(matrix: VisitationMatrix) -> Rational:
    """Largest ratio between two entries of a common row.

    Defined for entrywise-positive matrices only. Column sums a_i of such
    a matrix satisfy a_i <= max_row_ratio(M) * a_j for every pair i, j,
    and left-multiplying by a nonnegative matrix never increases it.
    """
    if not matrix.is_positive():
        raise ValueError("ratio bound needs an entrywise-positive matrix")
    best = Fraction(0)
    for row in matrix.entries:
        best = max(best, Fraction(max(row), min(row)))
    return best


@dataclass(frozen=True)
class RvStep:
    """One induction step: the shrunken map, the move taken, its matrix."""

    map: Iet
    move: RauzyMove
    matrix: VisitationMatrix


def rv_step(t: Iet) -> RvStep:
    """Cut the map once; raises SaddleConnectionError on an exact tie."""
    m = t.size
    k = t.perm.inverse(m)
    lam = t.lengths
    last, kth = lam[m - 1], lam[k - 1]
    if last == kth:
        raise SaddleConnectionError(
            f"tie between intervals {k} and {m} (both {last})", step=1, iet=t
        )
    if last < kth:
        move = RauzyMove.A
        new_lengths = lam[: k - 1] + (kth - last, last) + lam[k : m - 1]
    else:
        move = RauzyMove.B
        new_lengths = lam[: m - 1] + (last - kth,)
    matrix = step_matrix(t.perm, move)
    new_map = Iet(new_lengths, act(move, t.perm))
    assert matrix.apply(new_map.lengths) == t.lengths
    return RvStep(map=new_map, move=move, matrix=matrix)


@dataclass(frozen=True)
class RvTrace:
    """n induction steps from ``start``: visited maps and the total matrix.

    states[0] is the start map and states[i] the map after i steps; the
    cumulative matrix satisfies start.lengths == matrix @ states[-1].lengths.
    """

    start: Iet
    moves: tuple
    states: tuple
    matrix: VisitationMatrix

    @property
    def steps(self) -> int:
        return len(self.moves)


def rv_iterate(t: Iet, n: int) -> RvTrace:
    """Apply n induction steps, accumulating the visitation matrix."""
    if n < 0:
        raise ValueError("step count must be nonnegative")
    states = [t]
    moves = []
    matrix = VisitationMatrix.identity(t.size)
    current = t
    for i in range(n):
        try:
            step = rv_step(current)
        except SaddleConnectionError as exc:
            raise SaddleConnectionError(
                f"tie at step {i + 1} of {n}: {exc}",
                step=i + 1, path=tuple(moves), matrix=matrix, iet=current,
            ) from exc
        matrix = matrix @ step.matrix
        current = step.map
        states.append(current)
        moves.append(step.move)
    return RvTrace(start=t, moves=tuple(moves), states=tuple(states),
                   matrix=matrix)


def rv_normalized(t: Iet) -> RvStep:
    """One induction step followed by rescaling to unit total length.

    The returned matrix still relates the unnormalized length vectors.
    """
    step = rv_step(t)
    scale = step.map.total
    scaled = Iet(tuple(v / scale for v in step.map.lengths), step.map.perm)
    return RvStep(map=scaled, move=step.move, matrix=step.matrix)


def normalized(t: Iet) -> Iet:
    """The same exchange rescaled so the total length is 1."""
    return Iet(tuple(v / t.total for v in t.lengths), t.perm)


@dataclass(frozen=True)
class RauzyPath:
    """A move word anchored at a start permutation."""

    base: Permutation
    moves: tuple

    @classmethod
    def from_text(cls, base: Permutation, word: str) -> "RauzyPath":
        cleaned = word.replace(",", "").replace(" ", "")
        return cls(base, tuple(RauzyMove.from_text(ch) for ch in cleaned))

    @property
    def perms(self) -> tuple:
        """All visited permutations, start first (length steps + 1)."""
        out = [self.base]
        for move in self.moves:
            out.append(act(move, out[-1]))
        return tuple(out)

    def matrix(self) -> VisitationMatrix:
        total = VisitationMatrix.identity(self.base.size)
        p = self.base
        for move in self.moves:
            total = total @ step_matrix(p, move)
            p = act(move, p)
        return total

    def word(self) -> str:
        return "".join(m.value for m in self.moves)

    def is_loop(self) -> bool:
        return self.perms[-1] == self.base


@dataclass(frozen=True)
class RauzyClass:
    """All permutations reachable from a start by moves, with the edges."""

    perms: tuple
    edges: tuple  # (from_index, move, to_index), indices into perms

    def edge_triples(self) -> list:
        return [(self.perms[i], move, self.perms[j]) for i, move, j in self.edges]


def rauzy_class(p: Permutation) -> RauzyClass:
    """Breadth-first enumeration of the move graph containing p."""
    if not p.is_irreducible():
        raise ValueError(f"{p} is reducible; the move graph needs irreducible input")
    order = [p]
    index = {p: 0}
    edges = []
    queue = deque([p])
    while queue:
        current = queue.popleft()
        for move in (RauzyMove.A, RauzyMove.B):
            target = act(move, current)
            if target not in index:
                index[target] = len(order)
                order.append(target)
                queue.append(target)
            edges.append((index[current], move, index[target]))
    return RauzyClass(perms=tuple(order), edges=tuple(edges))


def reverse_path(alpha: Sequence, path: RauzyPath) -> Iet:
    """Rebuild the start map whose induction path is ``path``, ending at alpha.

    alpha is the length vector after the final step (all entries must be
    positive). The start lengths are matrix(path) @ alpha; the result is
    then checked by replaying induction forward, and any mismatch raises
    InconsistentPathError.
    """
    alpha = tuple(rational(v) for v in alpha)
    if len(alpha) != path.base.size:
        raise ValueError("alpha size does not match the path's permutation")
    if any(v <= 0 for v in alpha):
        raise ValueError("alpha must be strictly positive")
    start = Iet(path.matrix().apply(alpha), path.base)
    current = start
    for i, expected in enumerate(path.moves):
        try:
            step = rv_step(current)
        except SaddleConnectionError as exc:
            raise InconsistentPathError(
                f"replay hit a tie at step {i + 1}: {exc}", step=i + 1
            ) from exc
        if step.move is not expected:
            raise InconsistentPathError(
                f"replay step {i + 1} took move {step.move}, path says {expected}",
                step=i + 1,
            )
        current = step.map
    if current.lengths != alpha:
        raise InconsistentPathError("replayed lengths do not match alpha")
    return start


def detect_connection(t: Iet, depth: int) -> Optional[int]:
    """Step index (1-based) at which induction ties within depth, else None."""
    current = t
    for i in range(1, depth + 1):
        try:
            current = rv_step(current).map
        except SaddleConnectionError:
            return i
    return None
