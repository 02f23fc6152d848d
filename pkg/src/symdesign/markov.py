"""Moment blocks read as reversible Markov chains, and gap comparisons.

States of an A or Sym chain are pairs (a, b): off-diagonal pairs a < b in
lexicographic order, then the diagonal pairs (a, a).  D chains only have the
off-diagonal pairs.  ``P[x, y]`` is the probability of moving from x to y.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import cayley as cay
from . import moment
from .hilbert import U1, SectorDescriptor, phase_labels, swap_matrix
from .moment import MomentBlock, SubspaceBasis

__all__ = [
    "MarkovChain",
    "PathFamily",
    "GapComparison",
    "chain_from_block",
    "stationary_distribution",
    "spectral_gap",
    "chain_eigenvalues",
    "induced_chain",
    "dirichlet",
    "build_paths",
    "congestion_ratio",
    "predicted_tau_block",
    "predicted_subspace_matrix",
    "tau_partners",
    "sandwich_report",
    "congestion_constant",
    "global_constant",
]

STOCH_TOL = 1e-10
POS_TOL = 1e-13
SLACK = 1e-8


@dataclass(frozen=True)
class MarkovChain:
    states: tuple
    P: np.ndarray = field(repr=False)
    pi: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.states)

    def validate(self, tol: float = STOCH_TOL) -> None:
        P = self.P
        if P.shape != (len(self.states), len(self.states)):
            raise ValueError("transition matrix does not match the state list")
        if P.size and P.min() < -tol:
            raise ValueError(f"negative transition probability {P.min():.3e}")
        dev = np.abs(P.sum(axis=1) - 1).max() if P.size else 0.0
        if dev > tol:
            raise ValueError(f"row sums deviate from 1 by {dev:.3e}")
        if not is_irreducible(P):
            raise ValueError("chain is not irreducible")
        flow = self.pi[:, None] * P
        if np.abs(flow - flow.T).max(initial=0.0) > tol:
            raise ValueError("chain is not reversible with respect to pi")
        if np.abs(self.pi @ P - self.pi).max(initial=0.0) > tol:
            raise ValueError("pi is not stationary")


def is_irreducible(P: np.ndarray) -> bool:
    if len(P) <= 1:
        return True
    ncomp, _ = connected_components(csr_matrix(P > POS_TOL), directed=True, connection="strong")
    return ncomp == 1


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Left Perron vector of an irreducible stochastic matrix."""
    m = len(P)
    lhs = np.vstack([P.T - np.eye(m), np.ones((1, m))])
    rhs = np.zeros(m + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    return pi


def chain_from_block(block: MomentBlock) -> MarkovChain:
    """Chain on the states of an A, D or Sym block; validates stochasticity.

    The stationary distribution is proportional to 1 / |v_x|^2, which is
    uniform on A and D and gives weight 2 : 1 to off-diagonal : diagonal
    states of Sym.
    """
    if not isinstance(block.basis, SubspaceBasis):
        raise ValueError("chains are built from subspace blocks")
    P = np.asarray(block.matrix).T.copy()
    pi = np.asarray(block.stationary, dtype=float)
    chain = MarkovChain(block.basis.states, P, pi)
    chain.validate()
    return chain


def chain_eigenvalues(chain: MarkovChain) -> np.ndarray:
    """Descending real spectrum via the pi^(1/2) similarity."""
    if len(chain) == 0:
        return np.zeros(0)
    s = np.sqrt(chain.pi)
    sym = s[:, None] * chain.P / s[None, :]
    if np.abs(sym - sym.T).max() > 1e-9:
        raise ValueError("chain is not reversible")
    return np.linalg.eigvalsh(0.5 * (sym + sym.T))[::-1]


def spectral_gap(chain: MarkovChain) -> float:
    """1 - lambda_2 of a reversible chain; nan for a single state."""
    vals = chain_eigenvalues(chain)
    return 1.0 - float(vals[1]) if len(vals) > 1 else float("nan")


def induced_chain(chain: MarkovChain, kept: Sequence[int]) -> MarkovChain:
    """First-return chain on ``kept``: P_SS + P_SC (I - P_CC)^-1 P_CS."""
    kept = np.asarray(sorted(set(int(k) for k in kept)), dtype=int)
    if len(kept) == 0:
        raise ValueError("kept set must be nonempty")
    rest = np.setdiff1d(np.arange(len(chain)), kept)
    P = chain.P
    pss = P[np.ix_(kept, kept)]
    if len(rest):
        pcc = P[np.ix_(rest, rest)]
        try:
            solve = np.linalg.solve(np.eye(len(rest)) - pcc, P[np.ix_(rest, kept)])
        except np.linalg.LinAlgError as exc:
            raise AssertionError("I - P_CC is singular; chain is not irreducible") from exc
        pss = pss + P[np.ix_(kept, rest)] @ solve
    pi = chain.pi[kept] / chain.pi[kept].sum()
    return MarkovChain(tuple(chain.states[k] for k in kept), pss, pi)


def dirichlet(chain: MarkovChain, f: Sequence[float]) -> float:
    """(1/2) sum_{x,y} (f(x) - f(y))^2 pi(x) P(x, y)."""
    f = np.asarray(f, dtype=float)
    diff = f[:, None] - f[None, :]
    return 0.5 * float(np.sum(diff**2 * chain.pi[:, None] * chain.P))


# ------------------------------------------------------------ path comparison


@dataclass(frozen=True)
class PathFamily:
    """Target-chain path for each source transition x -> y (x != y)."""

    paths: dict = field(repr=False)

    def __len__(self) -> int:
        return len(self.paths)

    def lengths(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for path in self.paths.values():
            out[len(path) - 1] = out.get(len(path) - 1, 0) + 1
        return out


def build_paths(source: MarkovChain, target: MarkovChain) -> PathFamily:
    """Length-1 paths where the target moves directly, else length 2.

    The intermediate of a length-2 path is the smallest state (in the chain
    order) adjacent to both ends; reversed pairs use the reversed path.
    """
    if source.states != target.states:
        raise ValueError("source and target chains must share their state list")
    ps, pt = source.P, target.P
    m = len(ps)
    move_s = ps > POS_TOL
    move_t = pt > POS_TOL
    np.fill_diagonal(move_s, False)
    np.fill_diagonal(move_t, False)
    paths: dict[tuple[int, int], tuple[int, ...]] = {}
    for x in range(m):
        ys = np.nonzero(move_s[x])[0]
        ys = ys[ys > x]
        if not len(ys):
            continue
        direct = move_t[x, ys]
        for y in ys[direct]:
            paths[(x, int(y))] = (x, int(y))
        far = ys[~direct]
        if not len(far):
            continue
        nbrs = np.nonzero(move_t[x])[0]
        both = move_t[np.ix_(nbrs, far)]
        found = both.any(axis=0)
        if not found.all():
            bad = int(far[~found][0])
            raise AssertionError(
                f"no target path of length <= 2 from {source.states[x]} to {source.states[bad]}"
            )
        mids = nbrs[np.argmax(both, axis=0)]
        for y, z in zip(far, mids):
            paths[(x, int(y))] = (x, int(z), int(y))
    for (x, y), path in list(paths.items()):
        paths[(y, x)] = tuple(reversed(path))
    return PathFamily(paths)


def congestion_ratio(source: MarkovChain, target: MarkovChain, paths: PathFamily) -> float:
    """max over target edges (p, q) of the source flow routed through (p, q),
    weighted by path length, divided by pi_t(p) P_t(p, q)."""
    m = len(source)
    load = np.zeros((m, m))
    for (x, y), path in paths.paths.items():
        w = source.pi[x] * source.P[x, y] * (len(path) - 1)
        for p, q in zip(path[:-1], path[1:]):
            load[p, q] += w
    used = load > 0
    if not used.any():
        return 1.0 if m else 0.0
    cap = target.pi[:, None] * target.P
    if np.any(cap[used] <= POS_TOL):
        raise AssertionError("a path uses a transition the target chain does not have")
    return float((load[used] / cap[used]).max())


# ----------------------------------------------------- closed-form tau blocks


PATTERNS = ("pair-swap", "double-move", "single-move", "fixed")


def predicted_tau_block(
    symmetry: str,
    pattern: str,
    subspace: str,
    r: float | Sequence[float] | None = None,
) -> np.ndarray:
    """Closed-form contribution of one swap to an A, D or Sym chain.

    ``r`` holds axial distances for SU(d): r_ab (pair-swap), (r_ac, r_bd)
    (double-move), r_ac (single-move).  For U(1) every 1/r^2 is 0.
    State orders: pair-swap (ab, aa, bb); double-move (ab, cd, ad, cb);
    single-move (ab, cb).
    """
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}")
    if subspace not in ("A", "D", "Sym"):
        raise ValueError(f"unknown subspace {subspace!r}")

    def inv2(x) -> float:
        if symmetry == U1:
            return 0.0
        if x is None:
            raise ValueError("SU(d) blocks need axial distances")
        return 1.0 / float(x) ** 2

    if pattern == "fixed":
        return np.ones((1, 1))
    if pattern == "pair-swap":
        if subspace == "D":
            return np.ones((1, 1))
        t = inv2(r)
        off = 1.0 - t
        if subspace == "A":
            top = [4 + 4 * t, 2 * off, 2 * off]
        else:
            top = [6 + 2 * t, off, off]
        return np.array([top, [2 * off, 6 + 2 * t, 0], [2 * off, 0, 6 + 2 * t]]) / 8
    if pattern == "double-move":
        if symmetry == U1:
            tac = tbd = 0.0
        else:
            if r is None or len(r) != 2:  # type: ignore[arg-type]
                raise ValueError("double-move needs (r_ac, r_bd)")
            tac, tbd = inv2(r[0]), inv2(r[1])  # type: ignore[index]
        diag = 6 + tac + tbd
        return (
            np.array(
                [
                    [diag, 0, 1 - tbd, 1 - tac],
                    [0, diag, 1 - tac, 1 - tbd],
                    [1 - tbd, 1 - tac, diag, 0],
                    [1 - tac, 1 - tbd, 0, diag],
                ]
            )
            / 8
        )
    t = inv2(r)
    return np.array([[7 + t, 1 - t], [1 - t, 7 + t]]) / 8


def tau_partners(sector: SectorDescriptor, tau: Sequence[int]) -> tuple[list[int | None], list[float]]:
    """For each basis state, the state it is coupled to by ``tau`` and 1/r^2.

    U(1): partner is the swapped bitstring when it differs; 1/r^2 = 0.
    SU(d): partner is the tableau with the two entries exchanged when it is
    standard; 1/r^2 from the content vector.
    """
    mat = np.asarray(swap_matrix(sector, tau))
    dim = sector.dim
    partner: list[int | None] = [None] * dim
    inv_r2 = [0.0] * dim
    for k in range(dim):
        col = np.abs(mat[:, k]) > POS_TOL
        col[k] = False
        idx = np.nonzero(col)[0]
        if len(idx) > 1:
            raise ValueError("a swap couples a basis state to more than one other state")
        if len(idx):
            partner[k] = int(idx[0])
    if sector.symmetry != U1:
        i, j = sorted(tau)
        if j != i + 1:
            raise ValueError("closed-form SU(d) blocks need adjacent transpositions")
        cont = phase_labels(sector)
        for k in range(dim):
            r = int(cont[k, j - 1] - cont[k, i - 1])
            inv_r2[k] = 1.0 / r**2
    return partner, inv_r2


def predicted_subspace_matrix(sector: SectorDescriptor, tau: Sequence[int], subspace: str) -> np.ndarray:
    """Transition matrix of one swap on an A, D or Sym chain, assembled
    entirely from the closed-form blocks."""
    d = sector.dim
    partner, inv_r2 = tau_partners(sector, tau)
    r_of = [None if t == 0 else 1.0 / np.sqrt(t) for t in inv_r2]
    offdiag = [(a, b) for a in range(d) for b in range(a + 1, d)]
    states = offdiag + ([(a, a) for a in range(d)] if subspace != "D" else [])
    index = {s: k for k, s in enumerate(states)}

    def idx(a: int, b: int) -> int:
        return index[(min(a, b), max(a, b))]

    P = np.zeros((len(states), len(states)))
    done = np.zeros(len(states), dtype=bool)

    def place(block: np.ndarray, members: list[int]) -> None:
        P[np.ix_(members, members)] = block
        done[members] = True

    sym = sector.symmetry
    for a, b in offdiag:
        k = idx(a, b)
        if done[k]:
            continue
        pa, pb = partner[a], partner[b]
        if pa == b:
            members = [k] if subspace == "D" else [k, idx(a, a), idx(b, b)]
            place(predicted_tau_block(sym, "pair-swap", subspace, r_of[a]), members)
        elif pa is not None and pb is not None:
            c, e = pa, pb
            members = [k, idx(c, e), idx(a, e), idx(c, b)]
            place(predicted_tau_block(sym, "double-move", subspace, (r_of[a], r_of[b])), members)
        elif pa is not None:
            place(predicted_tau_block(sym, "single-move", subspace, r_of[a]), [k, idx(pa, b)])
        elif pb is not None:
            place(predicted_tau_block(sym, "single-move", subspace, r_of[b]), [k, idx(a, pb)])
        else:
            place(np.ones((1, 1)), [k])
    if subspace != "D":
        for a in range(d):
            k = idx(a, a)
            if not done[k]:
                if partner[a] is not None:
                    raise AssertionError("diagonal state left outside its pair-swap block")
                place(np.ones((1, 1)), [k])
    return P


# ------------------------------------------------------------------ sandwich


def congestion_constant(symmetry: str) -> float:
    return 5.0 if symmetry == U1 else 7.0


def global_constant(symmetry: str) -> float:
    return 10.0 if symmetry == U1 else 14.0


@dataclass
class GapComparison:
    sector: str
    symmetry: str
    graph: str
    n: int
    dim: int
    trivial: bool
    gaps: dict = field(default_factory=dict)
    dims: dict = field(default_factory=dict)
    congestion: float | None = None
    path_lengths: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def violations(self) -> list[dict]:
        return [c for c in self.checks if not c["pass"]]

    def to_dict(self) -> dict:
        return {
            "sector": self.sector,
            "symmetry": self.symmetry,
            "graph": self.graph,
            "n": self.n,
            "dim": self.dim,
            "trivial": self.trivial,
            "gaps": dict(self.gaps),
            "dims": dict(self.dims),
            "congestion": self.congestion,
            "path_lengths": {str(k): v for k, v in sorted(self.path_lengths.items())},
            "checks": [dict(c) for c in self.checks],
            "pass": self.passed,
        }


def _check(name: str, lhs: float, rhs: float, strict: bool = False, slack: float = SLACK) -> dict:
    ok = lhs < rhs if strict else lhs <= rhs + slack
    return {"name": name, "lhs": float(lhs), "rhs": float(rhs), "pass": bool(ok)}


def _top(block: MomentBlock, k: int) -> np.ndarray:
    if block.dim == 0:
        return np.zeros(0)
    return moment.spectral_data(block).eigenvalues[:k]


def sandwich_report(sector: SectorDescriptor, gen_set: cay.GeneratingSet) -> GapComparison:
    """Every gap comparison for the type3 block of one sector.

    Gaps: A, D, induced A, Cayley on Sym, full Cayley, 1 - lambda_1 on
    B and C.  Checks the two-sided Cayley comparison, the induced-chain and
    path-comparison chain, the B/C eigenvalue bound, the congestion constant
    and the final sector-level sandwich.
    """
    sym = sector.symmetry
    if sym != U1 and not gen_set.is_adjacent:
        raise ValueError("SU(d) comparisons need nearest-neighbour transpositions")
    rep = GapComparison(sector.name, sym, gen_set.kind, sector.n, sector.dim, sector.dim < 2)
    if rep.trivial:
        return rep
    fb = moment.filtered_basis("type3", (sector,))
    m_blocks = moment.subspace_split(
        moment.assemble_block(moment.swap_moment_terms("k2_modified"), gen_set, fb)
    )
    c_blocks = moment.subspace_split(
        moment.assemble_block(moment.swap_moment_terms("cayley_kernel"), gen_set, fb)
    )
    chain_a = chain_from_block(m_blocks["A"])
    chain_d = chain_from_block(m_blocks["D"])
    chain_s = chain_from_block(c_blocks["Sym"])
    off = [k for k, (a, b) in enumerate(chain_a.states) if a != b]
    chain_i = induced_chain(chain_a, off)
    if chain_i.states != chain_d.states:
        raise AssertionError("induced A states do not match D states")

    rep.dims = {name: blk.dim for name, blk in {**m_blocks, **c_blocks}.items()}
    gap_a = spectral_gap(chain_a)
    gap_d = spectral_gap(chain_d)
    gap_i = spectral_gap(chain_i)
    gap_sym = spectral_gap(chain_s)
    cay_vals = np.sort(
        np.concatenate([chain_eigenvalues(chain_s), _top(c_blocks["Alt"], 2), _top(c_blocks["W"], 2)])
    )[::-1]
    lam2_cay = float(cay_vals[1])
    lam1_bc = max(float(_top(m_blocks["B"], 1)[0]), float(_top(m_blocks["C"], 1)[0]))
    gap_cay = 1.0 - lam2_cay
    parts = [gap_a, 1.0 - lam1_bc] + ([gap_d] if len(chain_d) > 1 else [])
    gap_m = min(parts)
    rep.gaps = {
        "A": gap_a,
        "D": gap_d if len(chain_d) > 1 else None,
        "induced": gap_i if len(chain_i) > 1 else None,
        "cay_sym": gap_sym,
        "cay": gap_cay,
        "lambda2_cay": lam2_cay,
        "lambda1_bc": lam1_bc,
        "M": gap_m,
    }
    c = congestion_constant(sym)
    g = global_constant(sym)
    checks = [
        _check("gap_A/4 <= gap_cay_sym", gap_a / 4, gap_sym),
        _check("gap_cay_sym <= 2 gap_A", gap_sym, 2 * gap_a),
        _check("lambda1_BC <= lambda2_cay", lam1_bc, lam2_cay),
    ]
    if len(chain_d) > 1:
        paths = build_paths(chain_i, chain_d)
        congestion = congestion_ratio(chain_i, chain_d, paths)
        rep.congestion = congestion
        rep.path_lengths = paths.lengths()
        ratio = float((chain_i.pi / chain_d.pi).max())
        checks += [
            _check("gap_A <= gap_induced", gap_a, gap_i),
            _check(f"gap_induced <= {c:g} gap_D", gap_i, c * gap_d),
            _check("gap_D <= gap_induced", gap_d, gap_i),
            _check(
                f"congestion {'<=' if sym == U1 else '<'} {c:g}", congestion, c, strict=(sym != U1)
            ),
            _check("gap_induced <= A max(pi_i/pi_D) gap_D", gap_i, congestion * ratio * gap_d),
        ]
    checks += [
        _check(f"gap_cay/{g:g} <= gap_M", gap_cay / g, gap_m),
        _check(f"gap_M/{4 * g:g} <= gap_cay_sym/{g:g}", gap_m / (4 * g), gap_sym / g),
    ]
    rep.checks = checks
    return rep
