"""Second-moment operators restricted to phase-filtered tensor blocks.

A vector of a 4-fold tensor block is indexed by a tuple (a, c, b, d) that
stands for |a, c><b, d|, i.e. the factors are ordered U, U, conj(U), conj(U).
A placement such as ``"ItIt"`` applies the swap matrix to factors 2 and 4.

The commuting phase layer of the ensemble keeps exactly the tuples with
{a, c} = {b, d}.  Its projection is applied by restricting to those tuples:

* type1 (lam, mu):  positions (lam, mu, lam, mu), tuples (a, c, a, c)
* type2 (lam, mu):  positions (lam, mu, mu, lam), tuples (a, c, c, a)
* type3 (lam):      tuples H(a, b) = (a, b, a, b) for all a, b, followed by
  W(a, b) = (a, b, b, a) for a != b; 2 d^2 - d in total.

Type3 spans split into invariant subspaces A, B, C, D (for the ensemble and
modified operators) and Sym, Alt, W (for the Cayley operator).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from . import cayley as cay
from .hilbert import SectorDescriptor, swap_matrix

__all__ = [
    "MomentTermSet",
    "FilteredBasis",
    "SubspaceBasis",
    "MomentBlock",
    "SpectralData",
    "swap_moment_terms",
    "combination_terms",
    "filtered_basis",
    "subspace_basis",
    "tau_operator",
    "filtered_operator",
    "assemble_block",
    "subspace_split",
    "spectral_data",
    "commutant_vectors",
    "type12_bound",
    "type12_gap_check",
    "m2_square_check",
    "modified_gap_check",
    "UNIT_TOL",
    "LEAK_TOL",
]

UNIT_TOL = 1e-8
LEAK_TOL = 1e-10
DENSE_LIMIT = 1200


# --------------------------------------------------------------- term sets


@dataclass(frozen=True)
class MomentTermSet:
    """Weighted sum of placements of a swap over tensor factors."""

    name: str
    terms: tuple[tuple[Fraction, str], ...]
    normalization: Fraction = Fraction(1)

    @property
    def order(self) -> int:
        return len(self.terms[0][1])

    def unital_sum(self) -> Fraction:
        """Sum of the weights, i.e. the operator obtained by setting the swap to I."""
        return self.normalization * sum(c for c, _ in self.terms)

    def weighted(self) -> list[tuple[float, str]]:
        return [(float(self.normalization * c), p) for c, p in self.terms]


def _terms(name: str, weights: Sequence[int], placements: Sequence[str], denom: int) -> MomentTermSet:
    return MomentTermSet(
        name, tuple((Fraction(w), p) for w, p in zip(weights, placements)), Fraction(1, denom)
    )


def swap_moment_terms(order: str) -> MomentTermSet:
    """Term list of a single-swap moment operator.

    ``k1``: first moment, (II + tt)/2 on two factors.  ``k2``: the second
    moment of exp(-i theta swap) averaged over theta.  ``k2_modified``: an
    operator above it with the same unit eigenspace, I - T <= 4 (I - M).  ``cayley_kernel``: the
    two-sided swap kernel of the Cayley moment operator.
    """
    if order == "k1":
        return _terms(order, (1, 1), ("II", "tt"), 2)
    if order == "k2":
        return _terms(
            order,
            (3, 3, 1, 1, 1, 1, -1, -1),
            ("IIII", "tttt", "ItIt", "IttI", "tIIt", "tItI", "IItt", "ttII"),
            8,
        )
    if order == "k2_modified":
        return _terms(
            order,
            (6, 1, 1, 1, 1, -1, -1),
            ("IIII", "ItIt", "tItI", "tIIt", "IttI", "IItt", "ttII"),
            8,
        )
    if order == "cayley_kernel":
        return _terms(order, (6, 1, 1), ("IIII", "tItI", "ItIt"), 8)
    raise ValueError(f"unknown term set {order!r}")


def combination_terms(name: str, weights: Sequence[int], placements: Sequence[str]) -> MomentTermSet:
    """Arbitrary integer combination of placements, e.g. for identity checks."""
    return _terms(name, weights, placements, 1)


# ------------------------------------------------------------------ bases


@dataclass(frozen=True)
class FilteredBasis:
    block_type: str
    sectors: tuple[SectorDescriptor, ...]
    tuples: np.ndarray = field(repr=False, compare=False)

    @property
    def positions(self) -> tuple[SectorDescriptor, ...]:
        if self.block_type == "type3":
            (lam,) = self.sectors
            return (lam, lam, lam, lam)
        if self.block_type == "full":
            return tuple(self.sectors)  # type: ignore[return-value]
        lam, mu = self.sectors
        if self.block_type == "type1":
            return (lam, mu, lam, mu)
        return (lam, mu, mu, lam)

    def __len__(self) -> int:
        return len(self.tuples)

    @property
    def block_id(self) -> str:
        return f"{self.block_type}:" + "|".join(s.name for s in self.sectors)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def filtered_basis(block_type: str, sectors: Sequence[SectorDescriptor]) -> FilteredBasis:
    """Tuples that survive the phase layer, in the documented order.

    ``block_type`` may also be ``"full"`` with four sectors, which lists every
    product tuple (no filtering); it is used for identities that only hold
    before projection.
    """
    sectors = tuple(sectors)
    if len({(s.symmetry, s.n, s.d) for s in sectors}) != 1:
        raise ValueError("sectors must come from one decomposition")
    if block_type == "type3":
        if len(sectors) != 1:
            raise ValueError("type3 blocks take one sector")
        d = sectors[0].dim
        a, b = np.divmod(np.arange(d * d), d)
        h = np.stack([a, b, a, b], axis=1)
        off = a != b
        w = np.stack([a[off], b[off], b[off], a[off]], axis=1)
        tuples = np.concatenate([h, w]).astype(np.int64)
    elif block_type in ("type1", "type2"):
        if len(sectors) != 2:
            raise ValueError(f"{block_type} blocks take two sectors")
        if sectors[0] == sectors[1]:
            raise ValueError(f"{block_type} blocks need two distinct sectors")
        dl, dm = sectors[0].dim, sectors[1].dim
        a, c = np.divmod(np.arange(dl * dm), dm)
        if block_type == "type1":
            tuples = np.stack([a, c, a, c], axis=1).astype(np.int64)
        else:
            tuples = np.stack([a, c, c, a], axis=1).astype(np.int64)
    elif block_type == "full":
        if len(sectors) != 4:
            raise ValueError("full blocks take four sectors")
        grids = np.meshgrid(*[np.arange(s.dim) for s in sectors], indexing="ij")
        tuples = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    else:
        raise ValueError(f"unknown block type {block_type!r}")
    return FilteredBasis(block_type, sectors, _readonly(tuples))


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthogonal vectors inside a type3 filtered span.

    ``vectors`` has one column per state, in filtered-tuple coordinates;
    ``states`` labels the columns by (a, b).
    """

    name: str
    parent: FilteredBasis
    states: tuple[tuple[int, int], ...]
    vectors: sp.csc_matrix = field(repr=False, compare=False)
    norms2: np.ndarray = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def block_id(self) -> str:
        return f"{self.parent.block_id}:{self.name}"


SUBSPACES = ("A", "B", "C", "D", "Sym", "Alt", "W")
_SIGNS = {
    # coefficients of H(a,b), H(b,a), W(a,b), W(b,a)
    "A": (1, 1, 1, 1),
    "D": (1, 1, -1, -1),
    "B": (1, -1, -1, 1),
    "C": (1, -1, 1, -1),
    "Sym": (1, 1, 0, 0),
    "Alt": (1, -1, 0, 0),
}


def _h_index(d: int, a, b):
    return a * d + b


def _w_index(d: int, a, b):
    return d * d + a * (d - 1) + np.where(b < a, b, b - 1)


def subspace_basis(fbasis: FilteredBasis, name: str) -> SubspaceBasis:
    """Basis of an invariant subspace of a type3 span.

    Off-diagonal states (a < b, lexicographic) come first, followed by the
    diagonal states (a, a) for A and Sym.
    """
    if fbasis.block_type != "type3":
        raise ValueError("subspaces are defined on type3 blocks only")
    if name not in SUBSPACES:
        raise ValueError(f"unknown subspace {name!r}")
    d = fbasis.sectors[0].dim
    m = len(fbasis)
    iu, ju = np.triu_indices(d, k=1)
    if name == "W":
        a, b = np.divmod(np.arange(d * d), d)
        off = a != b
        a, b = a[off], b[off]
        rows = _w_index(d, a, b)
        cols = np.arange(len(a))
        vecs = sp.csc_matrix((np.ones(len(a)), (rows, cols)), shape=(m, len(a)))
        states = tuple(zip(a.tolist(), b.tolist()))
        return SubspaceBasis(name, fbasis, states, vecs, _readonly(np.ones(len(a))))
    signs = _SIGNS[name]
    k = len(iu)
    cols = np.arange(k)
    rows_l, cols_l, vals_l = [], [], []
    for sign, idx in zip(
        signs,
        (_h_index(d, iu, ju), _h_index(d, ju, iu), _w_index(d, iu, ju), _w_index(d, ju, iu)),
    ):
        if sign:
            rows_l.append(idx)
            cols_l.append(cols)
            vals_l.append(np.full(k, 0.5 * sign))
    states = list(zip(iu.tolist(), ju.tolist()))
    ncols = k
    if name in ("A", "Sym"):
        diag = np.arange(d)
        rows_l.append(_h_index(d, diag, diag))
        cols_l.append(k + diag)
        vals_l.append(np.ones(d))
        states += [(a, a) for a in range(d)]
        ncols = k + d
    vecs = sp.csc_matrix(
        (np.concatenate(vals_l), (np.concatenate(rows_l), np.concatenate(cols_l))), shape=(m, ncols)
    )
    norms2 = np.asarray(vecs.multiply(vecs).sum(axis=0)).ravel()
    return SubspaceBasis(name, fbasis, tuple(states), vecs, _readonly(norms2))


# ------------------------------------------------------------- assembly


@lru_cache(maxsize=4096)
def _column_table(sector: SectorDescriptor, tau: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Nonzero pattern of each column of the swap matrix, padded to equal width."""
    mat = np.asarray(swap_matrix(sector, tau))
    nz = np.abs(mat) > 0
    width = max(1, int(nz.sum(axis=0).max()))
    dim = mat.shape[0]
    rows = np.zeros((dim, width), dtype=np.int64)
    vals = np.zeros((dim, width))
    for col in range(dim):
        (idx,) = np.nonzero(nz[:, col])
        rows[col, : len(idx)] = idx
        vals[col, : len(idx)] = mat[idx, col]
    return _readonly(rows), _readonly(vals)


class _Lookup:
    """Maps tuples to their row in a filtered basis (or -1)."""

    def __init__(self, fbasis: FilteredBasis):
        self.radix = max(s.dim for s in fbasis.positions)
        keys = self.encode(fbasis.tuples)
        self.order = np.argsort(keys, kind="stable")
        self.sorted = keys[self.order]

    def encode(self, tuples: np.ndarray) -> np.ndarray:
        r = self.radix
        return ((tuples[:, 0] * r + tuples[:, 1]) * r + tuples[:, 2]) * r + tuples[:, 3]

    def find(self, tuples: np.ndarray) -> np.ndarray:
        keys = self.encode(tuples)
        pos = np.searchsorted(self.sorted, keys)
        pos = np.minimum(pos, len(self.sorted) - 1)
        hit = self.sorted[pos] == keys
        return np.where(hit, self.order[pos], -1)


def _normalize_tau(tau: Sequence[int]) -> tuple[int, int]:
    i, j = sorted(int(t) for t in tau)
    return i, j


def _term_entries(
    fbasis: FilteredBasis,
    lookup: _Lookup,
    placement: str,
    tau: tuple[int, int],
    weight: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if len(placement) != 4:
        raise ValueError(f"placement {placement!r} must have four factors")
    cur = np.array(fbasis.tuples)
    src = np.arange(len(cur))
    val = np.full(len(cur), weight)
    for k, sym in enumerate(placement):
        if sym == "I":
            continue
        if sym != "t":
            raise ValueError(f"bad placement symbol {sym!r}")
        rows, vals = _column_table(fbasis.positions[k], tau)
        width = rows.shape[1]
        old = cur[:, k]
        cur = np.repeat(cur, width, axis=0)
        src = np.repeat(src, width)
        val = (val[:, None] * vals[old]).ravel()
        cur[:, k] = rows[old].ravel()
        keep = val != 0
        cur, src, val = cur[keep], src[keep], val[keep]
    dst = lookup.find(cur)
    keep = dst >= 0
    return dst[keep], src[keep], val[keep]


def _operator(
    terms: MomentTermSet, taus: Iterable[tuple[int, int]], fbasis: FilteredBasis, scale: float
) -> sp.csr_matrix:
    lookup = _Lookup(fbasis)
    rows, cols, vals = [], [], []
    for tau in taus:
        for weight, placement in terms.weighted():
            r, c, v = _term_entries(fbasis, lookup, placement, tau, weight * scale)
            rows.append(r)
            cols.append(c)
            vals.append(v)
    m = len(fbasis)
    if not rows:
        return sp.csr_matrix((m, m))
    op = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(m, m)
    ).tocsr()
    op.sum_duplicates()
    op.eliminate_zeros()
    return op


def tau_operator(terms: MomentTermSet, fbasis: FilteredBasis, tau: Sequence[int]) -> sp.csr_matrix:
    """Single-swap operator compressed to the filtered span (column = image)."""
    return _operator(terms, [_normalize_tau(tau)], fbasis, 1.0)


def _taus(gen_set: cay.GeneratingSet | Sequence[Sequence[int]], n: int) -> list[tuple[int, int]]:
    if isinstance(gen_set, cay.GeneratingSet):
        if gen_set.n != n:
            raise ValueError(f"generating set acts on {gen_set.n} sites, sectors on {n}")
        return list(gen_set.transpositions)
    return list(cay.custom(n, gen_set).transpositions)


def filtered_operator(
    terms: MomentTermSet, gen_set: cay.GeneratingSet | Sequence[Sequence[int]], fbasis: FilteredBasis
) -> sp.csr_matrix:
    """(1/|T|) sum over the generating set, compressed to the filtered span."""
    taus = _taus(gen_set, fbasis.sectors[0].n)
    return _operator(terms, taus, fbasis, 1.0 / len(taus))


@dataclass(frozen=True)
class MomentBlock:
    """An operator written in a basis of an invariant span.

    ``matrix[i, j]`` is the coefficient of basis vector i in the image of
    basis vector j.  ``stationary`` is proportional to 1 / |v_i|^2; it makes
    the transposed matrix a reversible chain when it is stochastic.
    """

    basis: FilteredBasis | SubspaceBasis
    matrix: np.ndarray | sp.csr_matrix = field(repr=False)
    meta: dict = field(default_factory=dict, compare=False)
    stationary: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def block_id(self) -> str:
        return self.basis.block_id

    def dense(self) -> np.ndarray:
        if sp.issparse(self.matrix):
            return self.matrix.toarray()
        return np.asarray(self.matrix)


def _project(op: sp.csr_matrix, sub: SubspaceBasis, check: bool = True) -> np.ndarray:
    vecs = sub.vectors
    image = (op @ vecs).tocsc()
    gram = (vecs.T @ image).toarray()
    mat = gram / sub.norms2[:, None]
    if check and len(sub):
        resid = image - vecs @ sp.csc_matrix(mat)
        leak = float(np.abs(resid.data).max()) if resid.nnz else 0.0
        if leak > LEAK_TOL:
            raise AssertionError(f"subspace {sub.name} is not invariant: leakage {leak:.3e}")
    return mat


def _stationary(norms2: np.ndarray) -> np.ndarray:
    w = 1.0 / norms2
    return w / w.sum()


def assemble_block(
    terms: MomentTermSet,
    gen_set: cay.GeneratingSet | Sequence[Sequence[int]],
    basis: FilteredBasis | SubspaceBasis,
    *,
    operator: sp.csr_matrix | None = None,
) -> MomentBlock:
    """Average of the term set over the generating set, in the given basis.

    ``operator`` may pass a precomputed filtered operator of the parent span.
    """
    fbasis = basis.parent if isinstance(basis, SubspaceBasis) else basis
    if isinstance(gen_set, cay.GeneratingSet):
        gs = gen_set
    else:
        gs = cay.custom(fbasis.sectors[0].n, gen_set)
    op = operator if operator is not None else filtered_operator(terms, gs, fbasis)
    meta = {"terms": terms.name, "graph": gs.kind, "n": gs.n, "symmetry": fbasis.sectors[0].symmetry}
    if isinstance(basis, SubspaceBasis):
        mat = _project(op, basis)
        return MomentBlock(basis, mat, meta, _stationary(basis.norms2))
    m = len(basis)
    return MomentBlock(basis, op, meta, np.full(m, 1.0 / m))


def subspace_split(block: MomentBlock) -> dict[str, MomentBlock]:
    """Split a type3 block into its invariant subspaces.

    Ensemble and modified operators split into A, B, C, D; the Cayley
    operator into Sym, Alt, W.  Leakage between subspaces raises.
    """
    if not isinstance(block.basis, FilteredBasis) or block.basis.block_type != "type3":
        raise ValueError("subspace_split needs a type3 block on its filtered basis")
    op = block.matrix if sp.issparse(block.matrix) else sp.csr_matrix(block.matrix)
    names = ("Sym", "Alt", "W") if block.meta.get("terms") == "cayley_kernel" else ("A", "B", "C", "D")
    out = {}
    for name in names:
        sub = subspace_basis(block.basis, name)
        out[name] = MomentBlock(sub, _project(op, sub), dict(block.meta), _stationary(sub.norms2))
    return out


# ------------------------------------------------------------- spectra


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    gap: float
    unit_multiplicity: int
    complete: bool

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[0]) if len(self.eigenvalues) else float("nan")

    @property
    def lambda2(self) -> float:
        return float(self.eigenvalues[1]) if len(self.eigenvalues) > 1 else float("nan")


def _symmetric_form(block: MomentBlock) -> np.ndarray | sp.csr_matrix:
    mat = block.matrix
    if isinstance(block.basis, SubspaceBasis):
        s = np.sqrt(block.basis.norms2)
        return (s[:, None] * np.asarray(mat)) / s[None, :]
    return mat


def spectral_data(block: MomentBlock | np.ndarray, k: int | None = None) -> SpectralData:
    """Descending eigenvalues, gap 1 - lambda_2 and unit-eigenvalue count.

    Blocks on orthogonal bases are symmetrized by the basis norms first.
    Sparse blocks larger than a threshold use Lanczos for the top ``k``
    eigenvalues (default 6); the result is then flagged incomplete.
    """
    if isinstance(block, MomentBlock):
        mat = _symmetric_form(block)
    else:
        mat = block
    dim = mat.shape[0]
    if dim == 0:
        return SpectralData(np.zeros(0), float("nan"), 0, True)
    if sp.issparse(mat) and dim > DENSE_LIMIT:
        kk = min(k or 6, dim - 2)
        asym = abs(mat - mat.T)
        if asym.nnz and asym.max() > 1e-10:
            raise ValueError("sparse spectral data needs a symmetric matrix")
        # a generic start vector; a symmetric one would hide whole symmetry sectors
        v0 = np.random.default_rng(dim).standard_normal(dim)
        vals = eigsh(mat, k=kk, which="LA", v0=v0, tol=1e-13, return_eigenvectors=False)
        vals = np.sort(vals)[::-1]
        complete = False
    else:
        dense = mat.toarray() if sp.issparse(mat) else np.asarray(mat)
        if not np.allclose(dense, dense.T, atol=1e-10):
            raise ValueError("matrix is not symmetric and no stationary distribution was given")
        dense = 0.5 * (dense + dense.T)
        complete = True
        if not np.any(dense - np.diag(np.diag(dense))):
            vals = np.diag(dense)
        elif k is not None and k < dim:
            vals = scipy.linalg.eigh(dense, eigvals_only=True, subset_by_index=[dim - k, dim - 1])
            complete = False
        else:
            vals = np.linalg.eigvalsh(dense)
        vals = np.sort(vals)[::-1]
    mult = int(np.sum(vals > 1 - UNIT_TOL))
    gap = 1.0 - float(vals[1]) if len(vals) > 1 else float("nan")
    return SpectralData(vals, gap, mult, complete)


# --------------------------------------------------------- fixed points


def commutant_vectors(fbasis: FilteredBasis) -> np.ndarray:
    """Fixed points of every moment operator, as columns in filtered coordinates.

    One vector (identity pairing) for type1/type2, two (identity and swap
    pairings) for type3; they coincide for a one-dimensional sector.
    """
    m = len(fbasis)
    t = fbasis.tuples
    if fbasis.block_type in ("type1", "type2"):
        return np.ones((m, 1))
    if fbasis.block_type != "type3":
        raise ValueError("commutant vectors are defined for filtered blocks")
    ident = (t[:, 0] == t[:, 2]) & (t[:, 1] == t[:, 3])
    swap = (t[:, 0] == t[:, 3]) & (t[:, 1] == t[:, 2])
    return np.stack([ident, swap], axis=1).astype(float)


# ------------------------------------------------------- checks on blocks


def type12_bound(gen_set: cay.GeneratingSet) -> float:
    """Upper bound on lambda_2 of mixed-sector blocks: 1 - gap(Cayley) / (8 |T|)."""
    n = gen_set.n
    if gen_set.kind == "chain":
        return 1.0 - (1.0 - np.cos(np.pi / n)) / (4.0 * (n - 1))
    if gen_set.kind == "star":
        return 1.0 - 1.0 / (8.0 * (n - 1))
    if gen_set.kind == "complete":
        return 1.0 - 1.0 / (4.0 * (n - 1))
    return 1.0 - cay.standard_rep_gap(gen_set) / (8.0 * len(gen_set))


def type12_gap_check(
    gen_set: cay.GeneratingSet,
    lam: SectorDescriptor,
    mu: SectorDescriptor,
    block_type: str = "type1",
    slack: float = UNIT_TOL,
) -> dict:
    """lambda_2 of the ensemble operator on a mixed-sector block against the bound."""
    fb = filtered_basis(block_type, (lam, mu))
    block = assemble_block(swap_moment_terms("k2"), gen_set, fb)
    data = spectral_data(block, k=3)
    bound = type12_bound(gen_set)
    lam2 = data.lambda2 if len(data.eigenvalues) > 1 else float("-inf")
    return {
        "block_id": fb.block_id,
        "dim": len(fb),
        "lambda1": data.lambda1,
        "lambda2": lam2,
        "unit_multiplicity": data.unit_multiplicity,
        "bound": bound,
        "pass": bool(lam2 <= bound + slack),
    }


def m2_square_check(sectors: Sequence[SectorDescriptor], tau: Sequence[int]) -> float:
    """max |(M_tau)^2 - T_tau| on the full (unfiltered) 4-fold product block."""
    fb = filtered_basis("full", sectors)
    m_op = tau_operator(swap_moment_terms("k2_modified"), fb, tau)
    t_op = tau_operator(swap_moment_terms("k2"), fb, tau)
    diff = (m_op @ m_op - t_op).tocsr()
    diff.eliminate_zeros()
    return float(np.abs(diff.data).max()) if diff.nnz else 0.0


def modified_gap_check(
    sector: SectorDescriptor,
    gen_set: cay.GeneratingSet,
    factor: float = 2.0,
    slack: float = UNIT_TOL,
) -> dict:
    """Gap(M) <= gap(T) <= factor * gap(M) on each of the subspaces A, B, C, D.

    On A and D the gap is 1 - lambda_2; B and C carry no unit eigenvalue,
    so 1 - lambda_1 is used there.  Per swap, I - T <= 4 (I - M), so the
    upper comparison is only guaranteed for ``factor >= 4``.
    """
    fb = filtered_basis("type3", (sector,))
    tb = subspace_split(assemble_block(swap_moment_terms("k2"), gen_set, fb))
    mb = subspace_split(assemble_block(swap_moment_terms("k2_modified"), gen_set, fb))
    out: dict[str, dict] = {}
    for name in ("A", "B", "C", "D"):
        idx = 1 if name in ("A", "D") else 0
        if tb[name].dim <= idx:
            continue
        gt = float(1.0 - spectral_data(tb[name]).eigenvalues[idx])
        gm = float(1.0 - spectral_data(mb[name]).eigenvalues[idx])
        lower = gm <= gt + slack
        upper = gt <= factor * gm + slack
        out[name] = {
            "gap_M": gm,
            "gap_T": gt,
            "ratio": gt / gm if gm > 0 else float("inf"),
            "lower": bool(lower),
            "upper": bool(upper),
            "pass": bool(lower and upper),
        }
    return out
