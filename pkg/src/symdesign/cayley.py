"""Spectra of Cayley graphs of S_n generated by transpositions."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

__all__ = [
    "GeneratingSet",
    "CayleyGap",
    "chain",
    "star",
    "complete",
    "custom",
    "generating_set",
    "parse_edges",
    "closed_form_gap",
    "bruteforce_spectrum",
    "standard_rep_gap",
    "adjacency_lambda2",
    "cayley_moment_bound",
]

KINDS = ("chain", "star", "complete", "custom")


@dataclass(frozen=True)
class GeneratingSet:
    """Transpositions (i, j), 1-based with i < j, generating S_n."""

    kind: str
    n: int
    transpositions: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown generating set kind {self.kind!r}")
        if self.n < 2:
            raise ValueError("need n >= 2")
        taus: list[tuple[int, int]] = []
        for pair in self.transpositions:
            i, j = sorted(int(x) for x in pair)
            if i == j or i < 1 or j > self.n:
                raise ValueError(f"invalid transposition {pair} on {self.n} sites")
            if (i, j) not in taus:
                taus.append((i, j))
        object.__setattr__(self, "transpositions", tuple(taus))
        if not self.generates():
            raise ValueError(
                f"{self.kind} set {list(self.transpositions)} does not generate S_{self.n}: "
                "its swap graph on sites 1..n is disconnected"
            )

    def __len__(self) -> int:
        return len(self.transpositions)

    def __iter__(self):
        return iter(self.transpositions)

    def generates(self) -> bool:
        if not self.transpositions:
            return self.n == 1
        i, j = np.array(self.transpositions).T - 1
        graph = coo_matrix((np.ones(len(i)), (i, j)), shape=(self.n, self.n))
        ncomp, _ = connected_components(graph, directed=False)
        return ncomp == 1

    @property
    def is_adjacent(self) -> bool:
        return all(j == i + 1 for i, j in self.transpositions)


def chain(n: int) -> GeneratingSet:
    return GeneratingSet("chain", n, tuple((i, i + 1) for i in range(1, n)))


def star(n: int) -> GeneratingSet:
    return GeneratingSet("star", n, tuple((i, n) for i in range(1, n)))


def complete(n: int) -> GeneratingSet:
    return GeneratingSet("complete", n, tuple(itertools.combinations(range(1, n + 1), 2)))


def custom(n: int, edges: Iterable[Sequence[int]]) -> GeneratingSet:
    return GeneratingSet("custom", n, tuple(tuple(e) for e in edges))  # type: ignore[misc]


def parse_edges(text: str) -> list[tuple[int, int]]:
    """Parse ``"1:2,2:3"`` into [(1, 2), (2, 3)]."""
    edges = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        a, sep, b = item.partition(":")
        if not sep:
            raise ValueError(f"edge {item!r} is not of the form i:j")
        edges.append((int(a), int(b)))
    return edges


def generating_set(kind: str, n: int, edges: Iterable[Sequence[int]] | None = None) -> GeneratingSet:
    if kind == "chain":
        return chain(n)
    if kind == "star":
        return star(n)
    if kind == "complete":
        return complete(n)
    if kind == "custom":
        if edges is None:
            raise ValueError("custom generating sets need edges")
        return custom(n, edges)
    raise ValueError(f"unknown generating set kind {kind!r}")


@dataclass(frozen=True)
class CayleyGap:
    lambda1: float
    lambda2: float
    gap: float

    def to_dict(self) -> dict:
        return {"lambda1": self.lambda1, "lambda2": self.lambda2, "gap": self.gap}


def closed_form_gap(kind: str, n: int) -> CayleyGap:
    """Top two adjacency eigenvalues of the chain, star or complete Cayley graph."""
    if n < 2:
        raise ValueError("need n >= 2")
    if kind == "chain":
        lam1 = n - 1.0
        lam2 = n - 3 + 2 * math.cos(math.pi / n)
    elif kind == "star":
        lam1, lam2 = n - 1.0, n - 2.0
    elif kind == "complete":
        lam1 = n * (n - 1) / 2
        lam2 = (n - 1) * (n - 2) / 2 - 1
    else:
        raise ValueError(f"no closed form for kind {kind!r}")
    return CayleyGap(lam1, lam2, lam1 - lam2)


def bruteforce_spectrum(gen_set: GeneratingSet) -> np.ndarray:
    """Descending adjacency spectrum of the full n! vertex Cayley graph (n <= 6)."""
    n = gen_set.n
    if n > 6:
        raise ValueError("brute force is limited to n <= 6")
    perms = list(itertools.permutations(range(n)))
    index = {p: k for k, p in enumerate(perms)}
    adj = np.zeros((len(perms), len(perms)))
    for k, p in enumerate(perms):
        for i, j in gen_set:
            q = list(p)
            q[i - 1], q[j - 1] = q[j - 1], q[i - 1]
            adj[index[tuple(q)], k] += 1.0
    return np.linalg.eigvalsh(adj)[::-1]


def _laplacian(gen_set: GeneratingSet) -> np.ndarray:
    lap = np.zeros((gen_set.n, gen_set.n))
    for i, j in gen_set:
        a, b = i - 1, j - 1
        lap[a, a] += 1
        lap[b, b] += 1
        lap[a, b] -= 1
        lap[b, a] -= 1
    return lap


def standard_rep_gap(gen_set: GeneratingSet) -> float:
    """Second-smallest Laplacian eigenvalue of the swap graph on the n sites.

    By the Caputo-Liggett-Richthammer theorem (Aldous' conjecture) this equals the spectral gap of the Cayley graph.
    """
    return float(np.linalg.eigvalsh(_laplacian(gen_set))[1])


def adjacency_lambda2(gen_set: GeneratingSet) -> float:
    """Second largest Cayley adjacency eigenvalue, |T| minus the Laplacian gap."""
    if gen_set.kind in ("chain", "star", "complete"):
        return closed_form_gap(gen_set.kind, gen_set.n).lambda2
    return len(gen_set) - standard_rep_gap(gen_set)


def cayley_moment_bound(
    lambda2_block: float, gen_set: GeneratingSet, lazy: float = 0.75, slack: float = 1e-8
) -> dict:
    """Compare lambda2 of a Cayley moment block with the adjacency spectrum.

    The block operator is ``lazy * I + (1 - lazy) * K`` where K averages the
    two one-sided swap terms; K has lambda2 <= (1 + lambda2(A_G) / |T|) / 2,
    so the block has lambda2 <= lazy + (1 - lazy) * that.  ``kernel_bound``
    is the bound on K alone, which the block itself can exceed.
    """
    kernel_bound = 0.5 * (1.0 + adjacency_lambda2(gen_set) / len(gen_set))
    bound = lazy + (1.0 - lazy) * kernel_bound
    lam = float(lambda2_block)
    return {
        "lambda2": lam,
        "kernel_lambda2": (lam - lazy) / (1.0 - lazy),
        "kernel_bound": kernel_bound,
        "bound": bound,
        "pass": bool(lam <= bound + slack),
    }
