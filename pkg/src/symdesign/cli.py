"""Command-line front end: sectors, gaps, chain comparisons, checks, sampling."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from . import cayley as cay
from . import markov, moment, oracle
from .hilbert import SUD, U1, SectorDescriptor, schur_weyl_sectors, u1_sectors

SCHEMA = "symdesign/1"
CSV_COLUMNS = ("block_id", "dim", "lambda2", "gap", "bound", "pass")
MOMENT_ORDER = 2


class ConfigError(ValueError):
    pass


# ------------------------------------------------------------------ config


@dataclass(frozen=True)
class RunConfig:
    symmetry: str = U1
    n: int = 4
    d: int = 2
    graph: str = "chain"
    edges: tuple[tuple[int, int], ...] | None = None
    k: int = MOMENT_ORDER
    eps: float = 1e-6
    seed: int = 0
    samples: int = 10_000
    fmt: str = "json"

    def __post_init__(self) -> None:
        if self.symmetry not in (U1, SUD):
            raise ConfigError(f"unknown symmetry {self.symmetry!r}")
        if self.n < 2:
            raise ConfigError("need n >= 2")
        if self.symmetry == SUD and self.d < 2:
            raise ConfigError("SU(d) needs d >= 2")
        if self.k != MOMENT_ORDER:
            raise ConfigError("only second moments are supported")
        if not 0 < self.eps < 1:
            raise ConfigError("eps must lie in (0, 1)")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.symmetry == SUD and self.graph != "chain":
            raise ConfigError("SU(d) runs only support the chain generating set")

    @property
    def local_dim(self) -> int:
        return 2 if self.symmetry == U1 else self.d

    def sectors(self) -> list[SectorDescriptor]:
        if self.symmetry == U1:
            return u1_sectors(self.n)
        return schur_weyl_sectors(self.n, self.d)

    def gen_set(self) -> cay.GeneratingSet:
        try:
            return cay.generating_set(self.graph, self.n, self.edges)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        out = asdict(self)
        out["edges"] = [list(e) for e in self.edges] if self.edges else None
        out.pop("fmt")
        if self.symmetry == U1:
            out["d"] = 2
        return out


def convergence_depth(gap: float, k: int, n: int, d: int, eps: float) -> int:
    """ceil((2 k n ln d + ln(1/eps)) / gap), natural logarithms."""
    if not gap > 0:
        raise ValueError(f"gap {gap} <= 0: the ensemble does not converge")
    if gap > 1:
        raise ValueError("gap must not exceed 1")
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    return max(1, math.ceil((2 * k * n * math.log(d) + math.log(1 / eps)) / gap))


# ------------------------------------------------------------------ report


def _num(x) -> float | None:
    if x is None:
        return None
    x = float(x)
    return None if math.isnan(x) else x


@dataclass(frozen=True)
class BlockRecord:
    block_id: str
    dim: int
    eigenvalues: tuple[float, ...]
    lambda2: float | None
    gap: float | None
    bound: float | None = None
    passed: bool = True
    ensemble_lambda2: float | None = None

    def to_dict(self) -> dict:
        return {
            "block_id": self.block_id,
            "dim": self.dim,
            "eigenvalues": list(self.eigenvalues),
            "lambda2": self.lambda2,
            "gap": self.gap,
            "bound": self.bound,
            "ensemble_lambda2": self.ensemble_lambda2,
            "pass": self.passed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BlockRecord":
        return cls(
            data["block_id"],
            int(data["dim"]),
            tuple(data["eigenvalues"]),
            data["lambda2"],
            data["gap"],
            data["bound"],
            bool(data["pass"]),
            data["ensemble_lambda2"],
        )


@dataclass(frozen=True)
class SpectralReport:
    config: dict
    sectors: tuple[dict, ...] = ()
    blocks: tuple[BlockRecord, ...] = ()
    sandwich: tuple[dict, ...] = ()
    global_gap: float | None = None
    depth: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(b.passed for b in self.blocks) and all(s["pass"] for s in self.sandwich)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": self.config,
            "sectors": list(self.sectors),
            "blocks": [b.to_dict() for b in self.blocks],
            "sandwich": list(self.sandwich),
            "global": {
                "gap": self.global_gap,
                "depth": self.depth,
                "pass": self.passed,
            },
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SpectralReport":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {data.get('schema')!r}")
        glob = data["global"]
        return cls(
            data["config"],
            tuple(data["sectors"]),
            tuple(BlockRecord.from_dict(b) for b in data["blocks"]),
            tuple(data["sandwich"]),
            glob["gap"],
            glob["depth"],
            data["meta"],
        )


def _record(block_id: str, dim: int, vals: Sequence[float], idx: int, bound=None, passed=True) -> BlockRecord:
    head = tuple(float(v) for v in vals[:4])
    lam = float(vals[idx]) if len(vals) > idx else None
    gap = 1.0 - lam if lam is not None else None
    return BlockRecord(block_id, dim, head, lam, _num(gap), bound, bool(passed))


def _type3_task(sector: SectorDescriptor, gen_set: cay.GeneratingSet):
    rep = markov.sandwich_report(sector, gen_set)
    fb = moment.filtered_basis("type3", (sector,))
    records = []
    if not rep.trivial:
        g = rep.gaps
        lam1_bc = g["lambda1_bc"]
        records.append(_record(f"{fb.block_id}:A", rep.dims["A"], [1.0, 1.0 - g["A"]], 1))
        if g["D"] is not None:
            records.append(_record(f"{fb.block_id}:D", rep.dims["D"], [1.0, 1.0 - g["D"]], 1))
        records.append(_record(f"{fb.block_id}:BC", rep.dims["B"] + rep.dims["C"], [lam1_bc], 0))
    return records, rep


def _type12_task(block_type: str, lam: SectorDescriptor, mu: SectorDescriptor, gen_set: cay.GeneratingSet):
    """Mixed-sector block: modified-operator spectrum, with both the modified
    and the ensemble lambda_2 checked against the closed-form bound."""
    check = moment.type12_gap_check(gen_set, lam, mu, block_type)
    fb = moment.filtered_basis(block_type, (lam, mu))
    bound = float(check["bound"])
    if len(fb) < 2:
        return [_record(fb.block_id, len(fb), [1.0], 1, bound, True)], None
    data = moment.spectral_data(
        moment.assemble_block(moment.swap_moment_terms("k2_modified"), gen_set, fb), k=3
    )
    ok = check["pass"] and data.lambda2 <= bound + moment.UNIT_TOL
    rec = BlockRecord(
        fb.block_id,
        len(fb),
        tuple(float(v) for v in data.eigenvalues[:4]),
        _num(data.lambda2),
        _num(data.gap),
        bound,
        bool(ok),
        _num(check["lambda2"]),
    )
    return [rec], None


def _threads() -> int:
    raw = os.environ.get("SYMDESIGN_THREADS")
    if raw is None:
        return max(1, os.cpu_count() or 1)
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ConfigError(f"SYMDESIGN_THREADS must be an integer, got {raw!r}") from exc


def _fan_out(tasks: Sequence[Callable[[], object]]) -> list:
    workers = min(_threads(), max(1, len(tasks)))
    if workers == 1:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(t) for t in tasks]
        return [f.result() for f in futures]


def run_gap(config: RunConfig, include_mixed: bool = True) -> SpectralReport:
    """All block gaps, sandwich checks, the global gap and the depth.

    The global gap is the minimum over blocks of the modified-operator gaps;
    mixed-sector blocks are also checked against their closed-form bound.
    """
    gen_set = config.gen_set()
    sectors = config.sectors()
    tasks: list[Callable] = [lambda s=s: _type3_task(s, gen_set) for s in sectors]
    if include_mixed:
        for i, lam in enumerate(sectors):
            for mu in sectors[i + 1 :]:
                for bt in ("type1", "type2"):
                    tasks.append(lambda bt=bt, lam=lam, mu=mu: _type12_task(bt, lam, mu, gen_set))
    results = _fan_out(tasks)
    blocks: list[BlockRecord] = []
    sandwich: list[dict] = []
    for records, rep in results:
        blocks.extend(records)
        if rep is not None and not rep.trivial:
            sandwich.append(rep.to_dict())
    gaps = [b.gap for b in blocks if b.gap is not None]
    global_gap = min(gaps) if gaps else None
    depth = None
    if global_gap is not None and global_gap > 0:
        depth = convergence_depth(min(global_gap, 1.0), config.k, config.n, config.local_dim, config.eps)
    meta = {"log": "natural", "operator": "modified", "moment_order": config.k}
    return SpectralReport(
        config.to_dict(),
        tuple(s.to_dict() for s in sectors),
        tuple(blocks),
        tuple(sandwich),
        global_gap,
        depth,
        meta,
    )


# -------------------------------------------------------------------- emit


def _json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def report_csv(report: SpectralReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for b in report.blocks:
        writer.writerow(
            [b.block_id, b.dim, "" if b.lambda2 is None else repr(b.lambda2),
             "" if b.gap is None else repr(b.gap), "" if b.bound is None else repr(b.bound),
             str(b.passed).lower()]
        )
    return buf.getvalue()


def emit(doc: dict | SpectralReport, fmt: str = "json", path: str | None = None) -> str:
    """Serialize a report (or a plain document) and write it to ``path`` or stdout."""
    if fmt == "csv":
        if not isinstance(doc, SpectralReport):
            raise ConfigError("csv output is only available for block reports")
        text = report_csv(doc)
    else:
        text = _json_text(doc.to_dict() if isinstance(doc, SpectralReport) else doc)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    return text


# ---------------------------------------------------------------- commands


def _doc(kind: str, config: RunConfig | None, **body) -> dict:
    out = {"schema": SCHEMA, "command": kind}
    if config is not None:
        out["config"] = config.to_dict()
    out.update(body)
    return out


def cmd_sectors(config: RunConfig, args) -> tuple[dict, bool]:
    sectors = config.sectors()
    total = sum(s.dim * s.multiplicity for s in sectors)
    return _doc("sectors", config, sectors=[s.to_dict() for s in sectors], total_dim=total), True


def cmd_gap(config: RunConfig, args) -> tuple[SpectralReport, bool]:
    report = run_gap(config)
    return report, report.passed


def cmd_cayley(config: RunConfig, args) -> tuple[dict, bool]:
    gs = config.gen_set()
    lam1 = float(len(gs))
    lam2 = float(cay.adjacency_lambda2(gs))
    body = {"graph": gs.kind, "n": gs.n, "lambda1": lam1, "lambda2": lam2, "gap": lam1 - lam2}
    if gs.kind != "custom":
        cf = cay.closed_form_gap(gs.kind, gs.n)
        body["closed_form"] = cf.to_dict()
    body["standard_rep_gap"] = cay.standard_rep_gap(gs)
    return _doc("cayley", config, **body), True


def cmd_chains(config: RunConfig, args) -> tuple[dict, bool]:
    gs = config.gen_set()
    reports = []
    ok = True
    for s in config.sectors():
        rep = markov.sandwich_report(s, gs)
        reports.append(rep.to_dict())
        if not rep.passed:
            ok = False
            if args.fail_fast:
                break
    return _doc("chains", config, sectors=reports, **{"pass": ok}), ok


def _small_blocks(config: RunConfig) -> Iterable[tuple[str, tuple[SectorDescriptor, ...]]]:
    sectors = config.sectors()
    for s in sectors:
        if s.dim**4 <= oracle.DENSE_BUDGET:
            yield "type3", (s,)
    for i, lam in enumerate(sectors):
        for mu in sectors[i + 1 :]:
            if (lam.dim * mu.dim) ** 2 <= oracle.DENSE_BUDGET:
                yield "type1", (lam, mu)
                yield "type2", (lam, mu)


def cmd_verify(config: RunConfig, args) -> tuple[dict, bool]:
    gs = config.gen_set()
    terms = moment.swap_moment_terms("k2")
    rows = []
    ok = True
    for bt, secs in _small_blocks(config):
        fb = moment.filtered_basis(bt, secs)
        dense = oracle.dense_operator(bt, secs, terms, gs)
        blk = moment.assemble_block(terms, gs, fb).dense()
        dev = float(abs(dense.restrict(fb) - blk).max())
        mask_ok = bool((oracle.phase_mask(dense.positions) == oracle.pattern_mask(bt, secs)).all())
        match = oracle.unit_eigenspace_match(bt, secs, gs)
        row_ok = dev < 1e-10 and mask_ok and match["match"]
        rows.append(
            {
                "block_id": fb.block_id,
                "dense_dim": int(dense.matrix.shape[0]),
                "max_dev": dev,
                "filter_matches_phases": mask_ok,
                "unit_rank": match["rank_block"],
                "haar_rank": match["rank_haar"],
                "angle": _num(match["angle"]),
                "pass": row_ok,
            }
        )
        ok = ok and row_ok
        if not row_ok and args.fail_fast:
            break
    return _doc("verify", config, blocks=rows, **{"pass": ok}), ok


def cmd_sample(config: RunConfig, args) -> tuple[dict, bool]:
    rows = []
    for s in config.sectors():
        if args.block and moment.filtered_basis("type3", (s,)).block_id != args.block:
            continue
        if s.dim < 2 or (not args.block and 2 * s.dim**2 - s.dim > 200):
            continue
        fb = moment.filtered_basis("type3", (s,))
        res = oracle.monte_carlo_moment(fb, config.samples, config.seed)
        rows.append(res.to_dict())
    if args.block and not rows:
        raise ConfigError(f"no type3 block named {args.block!r}")
    return _doc("sample", config, results=rows), True


def cmd_depth(config: RunConfig, args) -> tuple[dict, bool]:
    if args.gap is None:
        raise ConfigError("depth needs --gap")
    try:
        p = convergence_depth(args.gap, config.k, config.n, config.local_dim, config.eps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    body = {"gap": args.gap, "k": config.k, "n": config.n, "d": config.local_dim,
            "eps": config.eps, "log": "natural", "depth": p}
    return _doc("depth", None, **body), True


COMMANDS = {
    "sectors": cmd_sectors,
    "gap": cmd_gap,
    "cayley": cmd_cayley,
    "chains": cmd_chains,
    "verify": cmd_verify,
    "sample": cmd_sample,
    "depth": cmd_depth,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--symmetry", choices=(U1, SUD), default=U1)
    common.add_argument("--d", type=int, default=2, help="local dimension for sud")
    common.add_argument("--n", type=int, default=4)
    common.add_argument("--graph", choices=cay.KINDS, default=None, help="default: chain, or custom with --edges")
    common.add_argument("--edges", default=None, help="custom transpositions, e.g. 1:2,2:3")
    common.add_argument("--eps", type=float, default=1e-6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=10_000)
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None)
    common.add_argument("--fail-fast", action="store_true")
    parser = argparse.ArgumentParser(prog="symdesign", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "depth":
            p.add_argument("--gap", type=float, default=None)
        if name == "sample":
            p.add_argument("--block", default=None, help="type3 block id, e.g. type3:r=1")
    return parser


def _config(args) -> RunConfig:
    edges = None
    if args.edges:
        try:
            edges = tuple(cay.parse_edges(args.edges))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    graph = args.graph or ("custom" if edges else "chain")
    return RunConfig(
        symmetry=args.symmetry,
        n=args.n,
        d=args.d,
        graph=graph,
        edges=edges,
        eps=args.eps,
        seed=args.seed,
        samples=args.samples,
        fmt=args.fmt,
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
        doc, ok = COMMANDS[args.command](config, args)
        if config.fmt == "csv" and not isinstance(doc, SpectralReport):
            raise ConfigError(f"csv output is not available for {args.command}")
        emit(doc, config.fmt, args.out)
    except ConfigError as exc:
        parser.exit(2, f"symdesign: error: {exc}\n")
    except OSError as exc:
        parser.exit(3, f"symdesign: error: {exc}\n")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
