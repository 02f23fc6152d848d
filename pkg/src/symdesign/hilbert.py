"""Symmetry sectors of n-qudit Hilbert space and per-sector swap actions.

U(1): one sector per Hamming weight r, spanned by weight-r bitstrings in
lexicographic order.  SU(d): one sector per partition with at most d rows
(Schur-Weyl duality), spanned by standard tableaux in canonical order, with
multiplicity given by the hook-content formula.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import snrep
from .snrep import Partition

__all__ = [
    "U1",
    "SUD",
    "SectorDescriptor",
    "SwapAction",
    "u1_sectors",
    "u1_sector",
    "schur_weyl_sectors",
    "sud_sector",
    "schur_weyl_multiplicity",
    "u1_phase_constants",
    "u1_phase_trace_product",
    "permutation_module_irreps",
    "swap_action",
    "swap_matrix",
    "phase_labels",
]

U1 = "u1"
SUD = "sud"


@dataclass(frozen=True)
class SectorDescriptor:
    """One symmetry sector.

    ``label`` is the Hamming weight r for U(1) and a Partition for SU(d).
    ``basis`` lists bitstrings (tuples of 0/1) or standard tableaux.
    """

    symmetry: str
    n: int
    d: int
    label: int | Partition
    dim: int
    multiplicity: int
    basis: tuple = field(repr=False, compare=False)

    @property
    def name(self) -> str:
        if self.symmetry == U1:
            return f"r={self.label}"
        return str(self.label)

    def to_dict(self) -> dict:
        label = self.label if self.symmetry == U1 else self.label.to_list()  # type: ignore[union-attr]
        return {"symmetry": self.symmetry, "label": label, "dim": self.dim, "mult": self.multiplicity}


@dataclass(frozen=True)
class SwapAction:
    sector: SectorDescriptor
    tau: tuple[int, int]
    matrix: np.ndarray = field(repr=False)


# --------------------------------------------------------------------- U(1)


@lru_cache(maxsize=None)
def _bitstrings(n: int, r: int) -> tuple[tuple[int, ...], ...]:
    return tuple(b for b in itertools.product((0, 1), repeat=n) if sum(b) == r)


def u1_sector(n: int, r: int) -> SectorDescriptor:
    if n < 1 or not 0 <= r <= n:
        raise ValueError(f"invalid U(1) sector n={n}, r={r}")
    basis = _bitstrings(n, r)
    return SectorDescriptor(U1, n, 2, r, len(basis), 1, basis)


def u1_sectors(n: int) -> list[SectorDescriptor]:
    """Charge sectors r = 0..n of n qubits."""
    if n < 1:
        raise ValueError("n must be positive")
    return [u1_sector(n, r) for r in range(n + 1)]


# -------------------------------------------------------------------- SU(d)


def schur_weyl_multiplicity(lam: Partition | Sequence[int], d: int) -> int:
    """dim of the SU(d) irrep W_lam: product over boxes of (d + c - r) / hook."""
    lam = snrep.as_partition(lam)
    num = math.prod(d + c - r for r, c in lam.boxes())
    den = math.prod(snrep._hooks(lam))
    return num // den


def sud_sector(n: int, d: int, lam: Partition | Sequence[int]) -> SectorDescriptor:
    lam = snrep.as_partition(lam)
    if lam.n != n or len(lam) > d:
        raise ValueError(f"{lam} is not a partition of {n} with at most {d} rows")
    basis = tuple(snrep.enumerate_tableaux(lam))
    return SectorDescriptor(SUD, n, d, lam, len(basis), schur_weyl_multiplicity(lam, d), basis)


def schur_weyl_sectors(n: int, d: int) -> list[SectorDescriptor]:
    """Schur-Weyl blocks of (C^d)^{otimes n}; checks sum dim*mult = d^n."""
    if n < 1 or d < 2:
        raise ValueError("need n >= 1 and d >= 2")
    out = [sud_sector(n, d, lam) for lam in snrep.enumerate_partitions(n, d)]
    total = sum(s.dim * s.multiplicity for s in out)
    if total != d**n:
        raise AssertionError(f"Schur-Weyl completeness failed: {total} != {d**n}")
    return out


# ----------------------------------------------------------- phase constants


def u1_phase_constants(n: int, j: int, sector: SectorDescriptor) -> Fraction:
    """Normalized trace of the order-j Z polynomial on a charge sector.

    C_0 = 1, C_1 = Tr(sum_i Z_i) / (n dim), and
    C_2 = 2 / (n(n-1)) * sum_{i<k} Tr(Z_i Z_k) / dim, with Z|1> = -|1>.
    """
    if sector.symmetry != U1 or sector.n != n:
        raise ValueError("u1_phase_constants needs a U(1) sector of the same n")
    if j not in (0, 1, 2):
        raise ValueError("only phase orders j <= 2 are supported")
    if j == 0:
        return Fraction(1)
    z = np.array(sector.basis, dtype=np.int64)
    z = 1 - 2 * z
    if j == 1:
        return Fraction(int(z.sum()), n * sector.dim)
    if n < 2:
        raise ValueError("C_2 needs n >= 2")
    pair = (int((z.sum(axis=1) ** 2).sum()) - n * sector.dim) // 2
    return Fraction(2 * pair, n * (n - 1) * sector.dim)


def u1_phase_trace_product(n: int, i: int, j: int) -> Fraction:
    """Tr(C_i C_j) over the full space, with C_j acting as C_j^{(r)} on sector r."""
    return sum(
        (s.dim * u1_phase_constants(n, i, s) * u1_phase_constants(n, j, s) for s in u1_sectors(n)),
        Fraction(0),
    )


# ------------------------------------------------------- permutation modules


def permutation_module_irreps(mu: Sequence[int]) -> list[Partition]:
    """Irreducible constituents (n-s, s), s = 0..r, of the module M^(n-r, r).

    ``mu`` is a two-entry label (n - r, r).  Labels with r > n - r are
    reflected to (r, n - r), which is the same module.
    """
    if len(mu) != 2:
        raise ValueError("expected a two-row label (n - r, r)")
    a, r = int(mu[0]), int(mu[1])
    if a < 0 or r < 0:
        raise ValueError("labels must be non-negative")
    n = a + r
    r = min(r, n - r)
    out = [snrep.as_partition((n - s, s)) for s in range(r + 1)]
    if sum(snrep.irrep_dimension(p) for p in out) != math.comb(n, r):
        raise AssertionError("permutation module dimension check failed")
    return out


# ------------------------------------------------------------- swap actions


def _check_tau(n: int, tau: Sequence[int]) -> tuple[int, int]:
    if len(tau) != 2:
        raise ValueError(f"transposition must be a pair, got {tau}")
    i, j = sorted(int(t) for t in tau)
    if i == j or i < 1 or j > n:
        raise ValueError(f"invalid transposition {tuple(tau)} on {n} sites")
    return i, j


@lru_cache(maxsize=None)
def _u1_swap(n: int, r: int, i: int, j: int) -> np.ndarray:
    basis = _bitstrings(n, r)
    index = {b: k for k, b in enumerate(basis)}
    mat = np.zeros((len(basis), len(basis)))
    for k, b in enumerate(basis):
        img = list(b)
        img[i - 1], img[j - 1] = img[j - 1], img[i - 1]
        mat[index[tuple(img)], k] = 1.0
    mat.setflags(write=False)
    return mat


def swap_matrix(sector: SectorDescriptor, tau: Sequence[int]) -> np.ndarray:
    """Matrix of the transposition ``tau`` on the sector basis (read-only for U(1))."""
    i, j = _check_tau(sector.n, tau)
    if sector.symmetry == U1:
        return _u1_swap(sector.n, sector.label, i, j)  # type: ignore[arg-type]
    if j == i + 1:
        return snrep._swap(sector.label, i)  # type: ignore[arg-type]
    return snrep.transposition_matrix(sector.label, i, j)  # type: ignore[arg-type]


def swap_action(sector: SectorDescriptor, tau: Sequence[int]) -> SwapAction:
    i, j = _check_tau(sector.n, tau)
    return SwapAction(sector, (i, j), np.array(swap_matrix(sector, (i, j))))


def phase_labels(sector: SectorDescriptor) -> np.ndarray:
    """Per-site diagonal values of the commuting phase generators.

    Z eigenvalues (+1 for bit 0, -1 for bit 1) for U(1); content vectors,
    i.e. YJM eigenvalues, for SU(d).  Shape (dim, n), integer.
    """
    if sector.symmetry == U1:
        return 1 - 2 * np.array(sector.basis, dtype=np.int64).reshape(sector.dim, sector.n)
    return np.array(snrep.contents_table(sector.label), dtype=np.int64)
