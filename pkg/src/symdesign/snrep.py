"""Exact representation theory of the symmetric group S_n.

Partitions, standard Young tableaux, content vectors, the Young orthogonal
form of adjacent transpositions, Young-Jucys-Murphy (YJM) operators and
transposition characters.

Tableaux of a shape are listed in a fixed canonical order: lexicographically
decreasing content vectors.  Every matrix produced here is indexed by that
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Partition",
    "StandardTableau",
    "as_partition",
    "enumerate_partitions",
    "irrep_dimension",
    "enumerate_tableaux",
    "content_vector",
    "content_sum",
    "tableau_index",
    "axial_distance",
    "adjacent_swap_matrix",
    "yjm_matrix",
    "adjacent_factors",
    "permutation_matrix",
    "transposition_character_ratio",
    "dominates",
    "DOMINATES",
    "DOMINATED",
    "EQUAL",
    "INCOMPARABLE",
]

DOMINATES = "dominates"
DOMINATED = "dominated"
EQUAL = "equal"
INCOMPARABLE = "incomparable"


@dataclass(frozen=True, order=True)
class Partition:
    """Weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > c) for c in range(self.parts[0])))

    def boxes(self) -> list[tuple[int, int]]:
        """Boxes as zero-based (row, col) pairs in reading order."""
        return [(r, c) for r, length in enumerate(self.parts) for c in range(length)]

    def to_list(self) -> list[int]:
        return list(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def as_partition(lam: Partition | Sequence[int]) -> Partition:
    if isinstance(lam, Partition):
        return lam
    return Partition(tuple(int(p) for p in lam if int(p) != 0))


@dataclass(frozen=True)
class StandardTableau:
    """A standard filling of a Young diagram with 1..n."""

    shape: Partition
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        shape = as_partition(self.shape)
        rows = tuple(tuple(int(x) for x in row) for row in self.rows)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "rows", rows)
        if tuple(len(r) for r in rows) != shape.parts:
            raise ValueError("row lengths do not match the shape")
        entries = sorted(x for row in rows for x in row)
        if entries != list(range(1, shape.n + 1)):
            raise ValueError("a standard tableau must contain each of 1..n once")
        for r, row in enumerate(rows):
            for c, x in enumerate(row):
                if c > 0 and row[c - 1] >= x:
                    raise ValueError("rows must increase")
                if r > 0 and rows[r - 1][c] >= x:
                    raise ValueError("columns must increase")

    def position(self, k: int) -> tuple[int, int]:
        for r, row in enumerate(self.rows):
            for c, x in enumerate(row):
                if x == k:
                    return r, c
        raise KeyError(k)

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


# ---------------------------------------------------------------- partitions


def enumerate_partitions(n: int, max_rows: int | None = None) -> list[Partition]:
    """All partitions of n with at most ``max_rows`` rows.

    Sorted in decreasing lexicographic order, which extends the dominance
    order: if a partition dominates another it comes first.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if max_rows is not None and max_rows < 1:
        raise ValueError("max_rows must be positive")
    if n == 0:
        return [Partition(())]
    rows = n if max_rows is None else max_rows
    out: list[Partition] = []

    def rec(remaining: int, largest: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(Partition(tuple(prefix)))
            return
        if len(prefix) == rows:
            return
        for p in range(min(remaining, largest), 0, -1):
            prefix.append(p)
            rec(remaining - p, p, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def _hooks(lam: Partition) -> list[int]:
    conj = lam.conjugate()
    return [(lam[r] - c - 1) + (conj[c] - r - 1) + 1 for r, c in lam.boxes()]


def irrep_dimension(lam: Partition | Sequence[int]) -> int:
    """Dimension of S^lam by the hook length formula."""
    lam = as_partition(lam)
    return math.factorial(lam.n) // math.prod(_hooks(lam))


# ------------------------------------------------------------------ tableaux


@lru_cache(maxsize=None)
def _tableaux(lam: Partition) -> tuple[StandardTableau, ...]:
    n = lam.n
    found: list[tuple[tuple[int, ...], StandardTableau]] = []
    rows: list[list[int]] = [[] for _ in lam.parts]

    def rec(k: int) -> None:
        if k > n:
            t = StandardTableau(lam, tuple(tuple(r) for r in rows))
            found.append((_content_of_rows(rows, n), t))
            return
        for r in range(len(rows)):
            c = len(rows[r])
            if c < lam[r] and (r == 0 or len(rows[r - 1]) > c):
                rows[r].append(k)
                rec(k + 1)
                rows[r].pop()

    rec(1)
    found.sort(key=lambda item: item[0], reverse=True)
    return tuple(t for _, t in found)


def _content_of_rows(rows: Sequence[Sequence[int]], n: int) -> tuple[int, ...]:
    vec = [0] * n
    for r, row in enumerate(rows):
        for c, x in enumerate(row):
            vec[x - 1] = c - r
    return tuple(vec)


def enumerate_tableaux(lam: Partition | Sequence[int]) -> list[StandardTableau]:
    """Standard tableaux of shape lam in canonical order."""
    return list(_tableaux(as_partition(lam)))


def content_vector(tableau: StandardTableau) -> tuple[int, ...]:
    """Entry i is col - row of the box holding i (zero-based coordinates)."""
    return _content_of_rows(tableau.rows, tableau.shape.n)


@lru_cache(maxsize=None)
def _contents(lam: Partition) -> np.ndarray:
    arr = np.array([content_vector(t) for t in _tableaux(lam)], dtype=np.int64)
    arr.setflags(write=False)
    return arr


def contents_table(lam: Partition | Sequence[int]) -> np.ndarray:
    """Array of shape (dim, n): row k is the content vector of tableau k."""
    return _contents(as_partition(lam))


@lru_cache(maxsize=None)
def _index(lam: Partition) -> dict[tuple[int, ...], int]:
    return {tuple(int(x) for x in row): k for k, row in enumerate(_contents(lam))}


def tableau_index(lam: Partition | Sequence[int], content: Sequence[int]) -> int | None:
    """Canonical index of the tableau with this content vector, if any."""
    return _index(as_partition(lam)).get(tuple(content))


def content_sum(lam: Partition | Sequence[int]) -> int:
    lam = as_partition(lam)
    return sum(c - r for r, c in lam.boxes())


# ----------------------------------------------------- orthogonal form, YJM


def _check_site(lam: Partition, j: int, upper: int) -> None:
    if not 1 <= j <= upper:
        raise ValueError(f"site index {j} outside 1..{upper} for n={lam.n}")


def axial_distance(content: Sequence[int], j: int) -> int:
    """r = content(j+1) - content(j) for 1-based j."""
    return int(content[j]) - int(content[j - 1])


@lru_cache(maxsize=None)
def _swap(lam: Partition, j: int) -> np.ndarray:
    cont = _contents(lam)
    dim = len(cont)
    mat = np.zeros((dim, dim))
    for k in range(dim):
        vec = list(cont[k])
        r = axial_distance(vec, j)
        vec[j - 1], vec[j] = vec[j], vec[j - 1]
        partner = _index(lam).get(tuple(vec))
        if partner is None:
            if abs(r) != 1:
                raise AssertionError("non-standard partner with |r| != 1")
            mat[k, k] = 1.0 / r
            continue
        if abs(r) == 1:
            raise AssertionError("standard partner with |r| = 1")
        mat[k, k] = 1.0 / r
        mat[partner, k] = math.sqrt(1.0 - 1.0 / (r * r))
    mat.setflags(write=False)
    return mat


def adjacent_swap_matrix(lam: Partition | Sequence[int], j: int) -> np.ndarray:
    """Young orthogonal form of the transposition (j, j+1) on S^lam."""
    lam = as_partition(lam)
    _check_site(lam, j, lam.n - 1)
    return _swap(lam, j).copy()


def yjm_matrix(lam: Partition | Sequence[int], i: int) -> np.ndarray:
    """X_i = (1,i) + ... + (i-1,i), diagonal in the Young basis."""
    lam = as_partition(lam)
    _check_site(lam, i, lam.n)
    return np.diag(_contents(lam)[:, i - 1].astype(float))


def _one_line(perm: Sequence[int], n: int) -> list[int]:
    w = [int(x) for x in perm]
    if sorted(w) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {list(perm)}")
    return w


def adjacent_factors(perm: Sequence[int]) -> list[int]:
    """Adjacent indices j_1..j_k with perm = s_{j_1} s_{j_2} ... s_{j_k}.

    ``perm`` is in one-line notation, perm[x-1] = perm(x).  Composition is
    right to left, (s t)(x) = s(t(x)).
    """
    w = _one_line(perm, len(perm))
    applied: list[int] = []
    n = len(w)
    # bubble sort: w -> w s_j swaps positions j and j+1
    for end in range(n - 1, 0, -1):
        for j in range(1, end + 1):
            if w[j - 1] > w[j]:
                w[j - 1], w[j] = w[j], w[j - 1]
                applied.append(j)
    # w s_{a1} ... s_{ak} = id  =>  w = s_{ak} ... s_{a1}
    return applied[::-1]


def permutation_matrix(
    lam: Partition | Sequence[int],
    perm: Sequence[int] | None = None,
    *,
    factors: Iterable[int] | None = None,
) -> np.ndarray:
    """Orthogonal matrix of a permutation on S^lam.

    Give either ``perm`` in one-line notation or ``factors``, a word of
    adjacent indices read as the product s_{j_1} s_{j_2} ....
    """
    lam = as_partition(lam)
    if (perm is None) == (factors is None):
        raise ValueError("give exactly one of perm or factors")
    if perm is not None:
        if len(perm) != lam.n:
            raise ValueError(f"permutation length {len(perm)} != n={lam.n}")
        word = adjacent_factors(perm)
    else:
        word = [int(j) for j in factors]  # type: ignore[union-attr]
        for j in word:
            _check_site(lam, j, lam.n - 1)
    mat = np.eye(irrep_dimension(lam))
    for j in word:
        mat = mat @ _swap(lam, j)
    return mat


def transposition_matrix(lam: Partition | Sequence[int], i: int, j: int) -> np.ndarray:
    """Matrix of the transposition (i, j), i != j, on S^lam."""
    lam = as_partition(lam)
    if i == j or not (1 <= i <= lam.n and 1 <= j <= lam.n):
        raise ValueError(f"invalid transposition ({i},{j}) for n={lam.n}")
    perm = list(range(1, lam.n + 1))
    perm[i - 1], perm[j - 1] = perm[j - 1], perm[i - 1]
    return permutation_matrix(lam, perm)


# ---------------------------------------------------------------- characters


def transposition_character_ratio(lam: Partition | Sequence[int]) -> Fraction:
    """chi_lam(transposition) / dim S^lam, exact.

    Computed from row and column lengths and, independently, from the
    content sum; the two must agree.
    """
    lam = as_partition(lam)
    n = lam.n
    if n < 2:
        return Fraction(1)
    norm = Fraction(2, n * (n - 1))
    by_shape = norm * sum(math.comb(p, 2) for p in lam) - norm * sum(
        math.comb(p, 2) for p in lam.conjugate()
    )
    by_content = norm * content_sum(lam)
    if by_shape != by_content:
        raise AssertionError(f"character routes disagree: {by_shape} vs {by_content}")
    return by_content


def dominates(lam: Partition | Sequence[int], mu: Partition | Sequence[int]) -> str:
    """Compare two partitions of the same n in the dominance order."""
    lam, mu = as_partition(lam), as_partition(mu)
    if lam.n != mu.n:
        raise ValueError(f"partitions of different n: {lam.n} vs {mu.n}")
    if lam == mu:
        return EQUAL
    ge = le = True
    a = b = 0
    for k in range(max(len(lam), len(mu))):
        a += lam[k] if k < len(lam) else 0
        b += mu[k] if k < len(mu) else 0
        ge &= a >= b
        le &= a <= b
    if ge:
        return DOMINATES
    if le:
        return DOMINATED
    return INCOMPARABLE
