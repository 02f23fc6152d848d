"""Independent dense constructions used to cross-check the filtered engine.

Everything here materializes the full 4-fold product space of a sector
tuple with ``np.kron`` and only works for small sectors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg

from . import cayley as cay
from . import moment
from .hilbert import U1, SectorDescriptor, phase_labels, schur_weyl_sectors, swap_matrix, u1_sectors
from .moment import FilteredBasis, MomentTermSet

__all__ = [
    "DenseBlockOperator",
    "SampledUnitary",
    "DENSE_BUDGET",
    "block_positions",
    "dense_operator",
    "phase_features",
    "phase_mask",
    "pattern_mask",
    "haar_commutant_projector",
    "unit_eigenspace_match",
    "sample_cqa_unitary",
    "monte_carlo_moment",
    "MonteCarloResult",
    "pair_swap_unit_multiplicity",
    "full_space_gap",
]

DENSE_BUDGET = 4096
UNIT_TOL = moment.UNIT_TOL


def block_positions(block_type: str, sectors: Sequence[SectorDescriptor]) -> tuple[SectorDescriptor, ...]:
    """Sector of each of the four tensor factors (U, U, conj U, conj U)."""
    sectors = tuple(sectors)
    if block_type == "type3":
        (lam,) = sectors
        return (lam, lam, lam, lam)
    if block_type == "type1":
        lam, mu = sectors
        return (lam, mu, lam, mu)
    if block_type == "type2":
        lam, mu = sectors
        return (lam, mu, mu, lam)
    if block_type == "full":
        if len(sectors) != 4:
            raise ValueError("full blocks take four sectors")
        return sectors
    raise ValueError(f"unknown block type {block_type!r}")


def _product_tuples(dims: Sequence[int]) -> np.ndarray:
    grids = np.meshgrid(*[np.arange(k) for k in dims], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


@dataclass(frozen=True)
class DenseBlockOperator:
    """Operator on the full product space of four sectors, row-major tuples."""

    block_type: str
    sectors: tuple[SectorDescriptor, ...]
    matrix: np.ndarray = field(repr=False)

    @property
    def positions(self) -> tuple[SectorDescriptor, ...]:
        return block_positions(self.block_type, self.sectors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.positions)

    def flat_index(self, tuples: np.ndarray) -> np.ndarray:
        return np.ravel_multi_index(tuple(np.asarray(tuples).T), self.dims)

    def restrict(self, fbasis: FilteredBasis) -> np.ndarray:
        idx = self.flat_index(fbasis.tuples)
        return self.matrix[np.ix_(idx, idx)]


def _check_budget(dims: Sequence[int]) -> int:
    total = math.prod(dims)
    if total > DENSE_BUDGET:
        raise ValueError(f"product dimension {total} exceeds the dense budget {DENSE_BUDGET}")
    return total


def wick_projector(block_type: str, sectors: Sequence[SectorDescriptor]) -> np.ndarray:
    """Orthogonal projector onto the filtered span, derived from phase labels."""
    mask = phase_mask(block_positions(block_type, sectors)).astype(float)
    return np.diag(mask)


def dense_operator(
    block_type: str,
    sectors: Sequence[SectorDescriptor],
    terms: MomentTermSet,
    gen_set: cay.GeneratingSet | Sequence[Sequence[int]],
    project: bool = True,
) -> DenseBlockOperator:
    """Average over the generating set of the term set, as a Kronecker sum,
    sandwiched between phase projectors when ``project`` is set."""
    sectors = tuple(sectors)
    pos = block_positions(block_type, sectors)
    dims = [s.dim for s in pos]
    total = _check_budget(dims)
    n = pos[0].n
    taus = list(gen_set) if isinstance(gen_set, cay.GeneratingSet) else list(cay.custom(n, gen_set))
    op = np.zeros((total, total))
    for tau in taus:
        mats = []
        for k, s in enumerate(pos):
            m = np.asarray(swap_matrix(s, tau), dtype=float)
            mats.append(m if k < 2 else m.conj())
        eyes = [np.eye(k) for k in dims]
        for w, placement in terms.weighted():
            factors = [mats[k] if ch == "t" else eyes[k] for k, ch in enumerate(placement)]
            op += w * _kron_all(factors)
    op /= len(taus)
    if project:
        proj = wick_projector(block_type, sectors)
        op = proj @ op @ proj
    return DenseBlockOperator(block_type, sectors, op)


def _kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


# -------------------------------------------------------------- phase layer


def phase_features(sector: SectorDescriptor, linear: bool = True) -> np.ndarray:
    """Integer eigenvalues of the commuting phase generators on each basis state.

    Pairwise products phi_k phi_l for k < l, plus the single-site values
    phi_k when ``linear`` is set.  phi is Z for U(1) and the content for SU(d).
    """
    phi = phase_labels(sector)
    k, l = np.triu_indices(sector.n, 1)
    pair = phi[:, k] * phi[:, l]
    return np.concatenate([phi, pair], axis=1) if linear else pair


def phase_mask(positions: Sequence[SectorDescriptor], linear: bool = True) -> np.ndarray:
    """Tuples (a, c, b, d) left invariant by every phase layer, as a flat mask.

    A tuple survives iff f(a) + f(c) - f(b) - f(d) = 0 for every generator f.
    """
    feats = [phase_features(s, linear) for s in positions]
    tuples = _product_tuples([s.dim for s in positions])
    net = (
        feats[0][tuples[:, 0]]
        + feats[1][tuples[:, 1]]
        - feats[2][tuples[:, 2]]
        - feats[3][tuples[:, 3]]
    )
    return ~np.any(net, axis=1)


def pattern_mask(block_type: str, sectors: Sequence[SectorDescriptor]) -> np.ndarray:
    """Flat mask of the filtered tuples of ``moment.filtered_basis``."""
    pos = block_positions(block_type, sectors)
    dims = tuple(s.dim for s in pos)
    fb = moment.filtered_basis(block_type, sectors)
    mask = np.zeros(math.prod(dims), dtype=bool)
    mask[np.ravel_multi_index(tuple(fb.tuples.T), dims)] = True
    return mask


# ------------------------------------------------------------------ Haar


def _commutant_columns(block_type: str, sectors: Sequence[SectorDescriptor]) -> np.ndarray:
    pos = block_positions(block_type, sectors)
    t = _product_tuples([s.dim for s in pos])
    ident = (t[:, 0] == t[:, 2]) & (t[:, 1] == t[:, 3])
    swap = (t[:, 0] == t[:, 3]) & (t[:, 1] == t[:, 2])
    if block_type == "type1":
        cols = [ident]
    elif block_type == "type2":
        cols = [swap]
    elif block_type == "type3":
        cols = [ident, swap]
    else:
        raise ValueError("commutant projectors are defined for type1, type2 and type3")
    return np.stack(cols, axis=1).astype(float)


def haar_commutant_projector(block_type: str, sectors: Sequence[SectorDescriptor]) -> DenseBlockOperator:
    """Orthogonal projector onto the identity (and swap) pairing vectors."""
    sectors = tuple(sectors)
    _check_budget([s.dim for s in block_positions(block_type, sectors)])
    q = scipy.linalg.orth(_commutant_columns(block_type, sectors))
    return DenseBlockOperator(block_type, sectors, q @ q.T)


def unit_eigenspace_match(
    block_type: str,
    sectors: Sequence[SectorDescriptor],
    gen_set: cay.GeneratingSet,
    terms: MomentTermSet | None = None,
) -> dict:
    """Largest principal angle between the unit eigenspace of the ensemble
    block and the range of the Haar commutant projector."""
    terms = terms or moment.swap_moment_terms("k2")
    fb = moment.filtered_basis(block_type, sectors)
    mat = moment.assemble_block(terms, gen_set, fb).dense()
    vals, vecs = np.linalg.eigh(0.5 * (mat + mat.T))
    unit = vecs[:, vals > 1 - UNIT_TOL]
    haar = haar_commutant_projector(block_type, sectors)
    idx = haar.flat_index(fb.tuples)
    ref = scipy.linalg.orth(haar.matrix[np.ix_(idx, idx)])
    out = {"block_id": fb.block_id, "rank_block": unit.shape[1], "rank_haar": ref.shape[1]}
    if unit.shape[1] != ref.shape[1]:
        out.update(angle=float("nan"), match=False, reason="unit multiplicity mismatch")
        return out
    angle = float(np.max(scipy.linalg.subspace_angles(unit, ref))) if unit.shape[1] else 0.0
    out.update(angle=angle, match=bool(angle < 1e-8))
    return out


# --------------------------------------------------------------- sampling


def _sectors(symmetry: str, n: int, d: int) -> list[SectorDescriptor]:
    return u1_sectors(n) if symmetry == U1 else schur_weyl_sectors(n, d)


@dataclass(frozen=True)
class SampledUnitary:
    """One draw of the ensemble, one unitary block per sector."""

    symmetry: str
    n: int
    j: int
    theta: float
    beta: np.ndarray = field(repr=False)
    beta_prime: np.ndarray = field(repr=False)
    seed: int | None
    blocks: dict = field(repr=False)

    def unitarity_residue(self) -> float:
        return max(
            float(np.abs(u.conj().T @ u - np.eye(len(u))).max()) for u in self.blocks.values()
        )


def _phase_vectors(sector: SectorDescriptor, beta: np.ndarray, linear: bool) -> np.ndarray:
    """sum_g beta_g f_g(a) for a batch of beta rows; shape (batch, dim)."""
    feats = phase_features(sector, linear).astype(float)
    return beta @ feats.T


def _n_phases(n: int, linear: bool) -> int:
    return n * (n - 1) // 2 + (n if linear else 0)


def _unitary_batch(
    sector: SectorDescriptor,
    j: np.ndarray,
    theta: np.ndarray,
    beta: np.ndarray,
    beta_prime: np.ndarray,
    linear: bool,
) -> np.ndarray:
    """diag(e^{-i phi beta}) (cos theta I - i sin theta tau_j) diag(e^{-i phi beta'})."""
    dim = sector.dim
    n = sector.n
    swaps = np.stack(
        [np.asarray(swap_matrix(sector, (k, k + 1)), dtype=float) for k in range(1, n)]
    ) if n > 1 else np.zeros((0, dim, dim))
    mid = np.cos(theta)[:, None, None] * np.eye(dim) - 1j * np.sin(theta)[:, None, None] * swaps[j - 1]
    left = np.exp(-1j * _phase_vectors(sector, beta, linear))
    right = np.exp(-1j * _phase_vectors(sector, beta_prime, linear))
    return left[:, :, None] * mid * right[:, None, :]


def _draw(rngs: tuple[np.random.Generator, ...], size: int, n: int, linear: bool):
    # one stream per parameter, so the draws do not depend on the batch size
    rj, rt, rb, rbp = rngs
    j = rj.integers(1, n, size=size)
    theta = rt.uniform(0.0, 2 * np.pi, size=size)
    m = _n_phases(n, linear)
    beta = rb.uniform(0.0, 2 * np.pi, size=(size, m))
    beta_prime = rbp.uniform(0.0, 2 * np.pi, size=(size, m))
    return j, theta, beta, beta_prime


def _generator(seed: int | None) -> tuple[np.random.Generator, ...]:
    seq = np.random.SeedSequence(seed)
    return tuple(np.random.Generator(np.random.Philox(child)) for child in seq.spawn(4))


def sample_cqa_unitary(
    symmetry: str,
    n: int,
    seed: int | None = None,
    *,
    d: int = 2,
    linear: bool = False,
    params: tuple | None = None,
) -> SampledUnitary:
    """Draw (or build from ``params = (j, theta, beta, beta')``) one circuit step.

    Phases are pairwise Z Z (U(1)) or content-product (SU(d)) terms, with
    single-site terms added when ``linear`` is set.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if params is None:
        j, theta, beta, beta_prime = _draw(_generator(seed), 1, n, linear)
    else:
        j, theta, beta, beta_prime = params
        j = np.array([int(j)])
        theta = np.array([float(theta)])
        m = _n_phases(n, linear)
        beta = np.broadcast_to(np.asarray(beta, dtype=float), (m,))[None, :]
        beta_prime = np.broadcast_to(np.asarray(beta_prime, dtype=float), (m,))[None, :]
        if not 1 <= j[0] <= n - 1:
            raise ValueError(f"swap index {j[0]} out of range 1..{n - 1}")
    blocks = {
        s.name: _unitary_batch(s, j, theta, beta, beta_prime, linear)[0]
        for s in _sectors(symmetry, n, d)
    }
    return SampledUnitary(symmetry, n, int(j[0]), float(theta[0]), beta[0], beta_prime[0], seed, blocks)


@dataclass(frozen=True)
class MonteCarloResult:
    block_id: str
    samples: int
    seed: int
    estimate: np.ndarray = field(repr=False)
    std: np.ndarray = field(repr=False)
    reference: np.ndarray = field(repr=False)

    @property
    def deviation(self) -> np.ndarray:
        return np.abs(self.estimate - self.reference)

    @property
    def max_dev(self) -> float:
        return float(self.deviation.max())

    def to_dict(self) -> dict:
        return {"block": self.block_id, "N": self.samples, "seed": self.seed, "max_dev": self.max_dev}


def monte_carlo_moment(
    fbasis: FilteredBasis,
    samples: int,
    seed: int,
    *,
    batch: int = 5000,
    linear: bool = False,
) -> MonteCarloResult:
    """Empirical <f_i, (U x U x conj U x conj U) f_j> over sampled circuit
    steps, against the filtered chain-ensemble block."""
    if samples < 1:
        raise ValueError("need at least one sample")
    pos = block_positions(fbasis.block_type, fbasis.sectors)
    n = pos[0].n
    t = fbasis.tuples
    rows = [t[:, k][:, None] for k in range(4)]
    cols = [t[:, k][None, :] for k in range(4)]
    m = len(t)
    total = np.zeros((m, m), dtype=complex)
    total_sq = np.zeros((m, m))
    rngs = _generator(seed)
    distinct = {s.name: s for s in pos}
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        params = _draw(rngs, size, n, linear)
        us = {name: _unitary_batch(s, *params, linear) for name, s in distinct.items()}
        u = [us[s.name] for s in pos]
        elem = (
            u[0][:, rows[0], cols[0]]
            * u[1][:, rows[1], cols[1]]
            * u[2][:, rows[2], cols[2]].conj()
            * u[3][:, rows[3], cols[3]].conj()
        )
        total += elem.sum(axis=0)
        total_sq += (np.abs(elem) ** 2).sum(axis=0)
        done += size
    mean = total / samples
    var = np.maximum(total_sq / samples - np.abs(mean) ** 2, 0.0)
    ref = moment.assemble_block(moment.swap_moment_terms("k2"), cay.chain(n), fbasis).dense()
    return MonteCarloResult(fbasis.block_id, samples, seed, mean, np.sqrt(var), ref)


# ---------------------------------------------------- whole-space checks


def pair_swap_unit_multiplicity(sector: SectorDescriptor, gen_set: cay.GeneratingSet) -> int:
    """Unit multiplicity of (1/|T|) sum tau x tau on sector x sector, no projection."""
    ops = [np.asarray(swap_matrix(sector, tau), dtype=float) for tau in gen_set]
    avg = sum(np.kron(o, o) for o in ops) / len(ops)
    vals = np.linalg.eigvalsh(0.5 * (avg + avg.T))
    return int(np.sum(vals > 1 - UNIT_TOL))


def full_space_gap(n: int, gen_set: cay.GeneratingSet, terms: MomentTermSet | None = None) -> dict:
    """Gap of the phase-projected operator on all n qubits at once.

    Works on bitstrings of the whole space: the span of tuples with
    {a, c} = {b, d} (2 * 4^n - 2^n of them), where swaps act as bit
    permutations.  The gap is 1 - the largest eigenvalue below 1.
    """
    if n > 5:
        raise ValueError("the whole-space check is limited to n <= 5")
    terms = terms or moment.swap_moment_terms("k2_modified")
    size = 2**n
    states = list(itertools.product((0, 1), repeat=n))
    weight = np.array([sum(s) for s in states])
    feats = 1 - 2 * np.array(states)
    k, l = np.triu_indices(n, 1)
    feats = np.concatenate([feats, feats[:, k] * feats[:, l]], axis=1)
    tuples = [(a, c, b, dd) for a in range(size) for c in range(size) for (b, dd) in ((a, c), (c, a))]
    tuples = sorted(set(tuples))
    t = np.array(tuples)
    net = feats[t[:, 0]] + feats[t[:, 1]] - feats[t[:, 2]] - feats[t[:, 3]]
    if np.any(net):
        raise AssertionError("a pairing tuple is not phase invariant")
    index = {tup: i for i, tup in enumerate(tuples)}
    m = len(tuples)
    op = np.zeros((m, m))
    for tau in gen_set:
        i, j = tau[0] - 1, tau[1] - 1
        perm = np.empty(size, dtype=np.int64)
        for x, s in enumerate(states):
            y = list(s)
            y[i], y[j] = y[j], y[i]
            perm[x] = states.index(tuple(y))
        for w, placement in terms.weighted():
            for col, tup in enumerate(tuples):
                img = tuple(perm[x] if ch == "t" else x for x, ch in zip(tup, placement))
                row = index.get(img)
                if row is not None:
                    op[row, col] += w
    op /= len(gen_set)
    vals = np.sort(np.linalg.eigvalsh(0.5 * (op + op.T)))[::-1]
    unit = int(np.sum(vals > 1 - UNIT_TOL))
    sizes = np.bincount(weight, minlength=n + 1)
    nsec = len(sizes)
    expected = 2 * nsec * (nsec - 1) + sum(2 if s > 1 else 1 for s in sizes)
    gap = 1.0 - float(vals[unit]) if unit < len(vals) else float("nan")
    return {"dim": m, "unit_multiplicity": unit, "expected_unit": expected, "gap": gap}
