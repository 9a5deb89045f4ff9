"""octagrid command line: verify, lemmas, solve, periodic.

Exit codes: 0 ok, 1 a violation or a failed claim (or UNSAT), 2 usage or
parse error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass, field

from . import lemmas as lm
from .grid import window_edges
from .labeling import (
    FormatError, LabelingError, PeriodicLabeling, dump, load, verify, verify_periodic,
)
from .packing import check_packing, packing_lower_bound
from .render import render_labeling, render_patch
from .solver import (
    DEFAULT_NODE_BUDGET, DEFAULT_TIME_BUDGET, SearchCertificate, SearchConfig, Verdict, feasible,
    linear_search, min_span, periodic_search, sweep_periods,
)
from .subgraph import K4Site, build_G, build_GS, window_region

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
BUDGET_ENV = "OCTAGRID_BUDGET"
CENTRAL_SITE = K4Site.at(0, 0)


@dataclass
class CommandOutcome:
    code: int
    payload: dict = field(default_factory=dict)
    text: str = ""


class UsageError(Exception):
    pass


def _size(spec: str, what: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)[xX](\d+)", spec.strip())
    if not m:
        raise UsageError(f"{what} must look like WxH, got {spec!r}")
    return int(m.group(1)), int(m.group(2))


def time_budget(args) -> float:
    """--budget beats $OCTAGRID_BUDGET beats the built-in default."""
    if getattr(args, "budget", None) is not None:
        value, src = args.budget, "--budget"
    elif os.environ.get(BUDGET_ENV):
        value, src = os.environ[BUDGET_ENV], BUDGET_ENV
    else:
        return DEFAULT_TIME_BUDGET
    try:
        seconds = float(value)
    except ValueError:
        raise UsageError(f"{src} must be a number of seconds, got {value!r}") from None
    if seconds <= 0:
        raise UsageError(f"{src} must be positive")
    return seconds


def _config(args) -> SearchConfig:
    try:
        return SearchConfig(node_budget=args.nodes, time_budget=time_budget(args), workers=args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _region(spec: str):
    spec = spec.lower()
    if spec == "gs":
        return build_GS(CENTRAL_SITE)
    if spec == "g":
        return build_G(CENTRAL_SITE)
    w, h = _size(spec, "--region")
    return window_region(0, 0, w, h)


def _periodic_picture(plab: PeriodicLabeling) -> str:
    w, h = plab.period[0] + 1, plab.period[1] + 1
    return render_patch(plab.instantiate(window_edges(0, 0, w, h)).assignment, 0, 0, w, h)


# ---------------------------------------------------------------- commands

def cmd_verify(args) -> CommandOutcome:
    try:
        obj = load(args.path)
    except FormatError as exc:
        return CommandOutcome(EXIT_USAGE, {"error": str(exc)}, f"parse error: {exc}")
    except OSError as exc:
        return CommandOutcome(EXIT_USAGE, {"error": str(exc)}, f"cannot read {args.path}: {exc}")
    try:
        if isinstance(obj, PeriodicLabeling):
            report = verify_periodic(obj)
            kind = f"periodic {obj.period[0]}x{obj.period[1]}"
        else:
            region = _region(args.region) if args.region else obj.region()
            report = verify(region, obj)
            kind = "finite"
    except LabelingError as exc:
        return CommandOutcome(EXIT_USAGE, {"error": str(exc)}, f"error: {exc}")
    lines = [f"{kind} labeling: {report.checked_pairs} constrained pairs checked, "
             f"{len(report.violations)} violations"]
    for v in report.violations:
        lines.append(f"  {v.e1} ~ {v.e2}: distance {v.distance}, need gap {v.required}, got {v.actual}")
    if args.render:
        lines.append(_periodic_picture(obj) if isinstance(obj, PeriodicLabeling) else render_labeling(obj.assignment))
    return CommandOutcome(EXIT_OK if report.ok else EXIT_FAIL, report.to_json(), "\n".join(lines))


def _claim_line(c: lm.ClaimResult) -> str:
    found = "-" if c.min_excluded_found is None else c.min_excluded_found
    want = "-" if c.paper_min is None else c.paper_min
    return f"  [{'pass' if c.passed else 'FAIL'}] {c.claim_id}: found {found}, stated {want}, " \
           f"{c.scenario_count} scenarios"


def cmd_lemmas(args) -> CommandOutcome:
    if args.claim == "all":
        reports = lm.run_all() + [check_packing()]
    elif args.claim == "packing":
        reports = [check_packing()]
    elif args.claim == "pigeonhole":
        reports = [lm.check_pigeonhole(lm.mechanized_coefficients(lm.check_lemma1(), lm.check_lemma_triples()))]
    else:
        reports = [lm.CHECKS[args.claim]()]
    chain = lm.pigeonhole_chain()
    for r in reports:
        if r.name == "pigeonhole":
            chain = r.facts["chain"]
    ok = all(r.passed for r in reports)
    lines = []
    for r in reports:
        lines.append(f"{r.name}: {'pass' if r.passed else 'FAIL'}")
        lines.extend(_claim_line(c) for c in r.claims)
        for k, v in r.facts.items():
            if k not in ("chain", "two_unused"):
                lines.append(f"  {k}: {v}")
        lines.extend(f"  note: {n}" for n in r.notes)
    steps = " -> ".join(str(s["lower_bound"]) for s in chain)
    lines.append(f"LB chain: {steps}")
    for s in chain:
        lines.append(f"  colors 0..{s['palette_max']}: demand {s['min_demand']} vs {s['holes']} holes, "
                     f"some site misses {s['missing_colors']} -> span >= {s['lower_bound']}")
    payload = {"pass": ok, "reports": [r.to_json(args.records) for r in reports], "chain": chain}
    return CommandOutcome(EXIT_OK if ok else EXIT_FAIL, payload, "\n".join(lines))


def _verdict_code(verdict: Verdict) -> int:
    return {Verdict.SAT: EXIT_OK, Verdict.UNSAT: EXIT_FAIL, Verdict.UNKNOWN: EXIT_BUDGET}[verdict]


def cmd_solve(args) -> CommandOutcome:
    if args.gs:
        region, name = build_GS(CENTRAL_SITE), "G_S"
    elif args.g:
        region, name = build_G(CENTRAL_SITE), "G"
    else:
        w, h = _size(args.patch, "--patch")
        if w < 1 or h < 1 or w * h < 2:
            raise UsageError("--patch needs at least two vertices")
        region, name = window_region(0, 0, w, h), f"patch {w}x{h}"
    cfg = _config(args)
    if args.n is not None:
        cert = feasible(region, args.n, args.h, args.k, cfg)
        head = f"{name}, {len(region)} edges, L({args.h},{args.k}), n = {args.n}: {cert.verdict.value}"
    else:
        best, cert = min_span(region, args.h, args.k, cfg)
        if best is None:
            head = (f"{name}, {len(region)} edges, L({args.h},{args.k}): budget exhausted, "
                    f"span in [{cert.lower_bound}, {cert.upper_bound}]")
        else:
            head = f"{name}, {len(region)} edges, L({args.h},{args.k}): minimum span {best}"
    lines = [head, f"  nodes {cert.nodes}, depth {cert.max_depth}, {cert.elapsed_ms} ms"]
    if cert.witness is not None:
        if args.out:
            dump(cert.witness, args.out)
            lines.append(f"  witness written to {args.out}")
        if args.render:
            lines.append(render_labeling(cert.witness.assignment))
    return CommandOutcome(_verdict_code(cert.verdict), cert.to_json(), "\n".join(lines))


def _linear_certificate(args) -> SearchCertificate:
    t0 = time.monotonic()
    plab = linear_search(args.n, args.h, args.k)
    return SearchCertificate(Verdict.SAT if plab else Verdict.UNSAT, args.n,
                             elapsed_ms=int((time.monotonic() - t0) * 1000),
                             witness=plab, witness_verified=plab is not None)


def cmd_periodic(args) -> CommandOutcome:
    cfg = _config(args)
    deadline_left = cfg.time_budget
    if args.linear:
        cert = _linear_certificate(args)
        certs = [(cert.witness.period if cert.witness else None, cert)]
    else:
        periods = sweep_periods(6, args.max_period) if args.sweep else [_size(args.period or "6x6", "--period")]
        certs = []
        for period in periods:
            per_cfg = SearchConfig(node_budget=cfg.node_budget, time_budget=max(deadline_left, 1e-3),
                                   workers=cfg.workers)
            try:
                cert = periodic_search(period, args.n, args.h, args.k, per_cfg)
            except LabelingError as exc:
                return CommandOutcome(EXIT_USAGE, {"error": str(exc)}, f"error: {exc}")
            certs.append((period, cert))
            deadline_left -= cert.elapsed_ms / 1000
            if cert.verdict is Verdict.SAT or deadline_left <= 0:
                break
    period, cert = certs[-1]
    if args.linear:
        where = f"period {period[0]}x{period[1]}" if period else "no period"
        lines = [f"linear family mod {args.n + 1}: {cert.verdict.value} ({where}, {cert.elapsed_ms} ms)"]
    else:
        lines = [f"period {p[0]}x{p[1]}: {c.verdict.value} ({c.nodes} nodes, {c.elapsed_ms} ms)"
                 for p, c in certs]
    if cert.verdict is Verdict.SAT:
        verdict = Verdict.SAT
        lines.append(f"certified upper bound {args.n}")
        if args.out:
            dump(cert.witness, args.out)
            lines.append(f"periodic labeling written to {args.out}")
        if args.render:
            lines.append(_periodic_picture(cert.witness))
    elif any(c.verdict is Verdict.UNKNOWN for _, c in certs) or (args.sweep and deadline_left <= 0):
        verdict = Verdict.UNKNOWN
    else:
        verdict = Verdict.UNSAT
    payload = cert.to_json()
    if (args.h, args.k) == (1, 2) and verdict is not Verdict.SAT and args.n < packing_lower_bound():
        note = (f"no L(1,2)-edge labeling with colors 0..{args.n} exists at any period "
                f"(area bound {packing_lower_bound()}, see 'lemmas --claim packing')")
        lines.append(f"note: {note}")
        payload["note"] = note
    payload["period"] = list(period) if period else None
    if args.linear:
        payload["family"] = "linear"
    if args.sweep:
        payload["tried"] = [{"period": list(p), "verdict": c.verdict.value} for p, c in certs]
    return CommandOutcome(_verdict_code(verdict), payload, "\n".join(lines))


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--threads", type=int, default=1, help="cap on worker processes")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--budget", help=f"time budget in seconds (else ${BUDGET_ENV}, else "
                                         f"{DEFAULT_TIME_BUDGET:g})")
    search.add_argument("--nodes", type=int, default=DEFAULT_NODE_BUDGET, help="search node budget")
    search.add_argument("--h", type=int, default=1)
    search.add_argument("--k", type=int, default=2)
    search.add_argument("--out", help="write the witness here on SAT")
    search.add_argument("--render", action="store_true", help="draw the witness")

    p = argparse.ArgumentParser(prog="octagrid", description="L(h,k)-edge labelings of the king graph")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="check a labeling file")
    v.add_argument("path")
    v.add_argument("--region", help="WxH, gs or g; default: every labeled edge")
    v.add_argument("--render", action="store_true")
    v.set_defaults(func=cmd_verify)

    le = sub.add_parser("lemmas", parents=[common], help="run the mechanized counting arguments")
    le.add_argument("--claim", choices=("all", "structure", "lemma1", "triples", "obs1", "pigeonhole", "packing"),
                    default="all")
    le.add_argument("--records", action="store_true", help="include every scenario in JSON output")
    le.set_defaults(func=cmd_lemmas)

    so = sub.add_parser("solve", parents=[common, search], help="exact span of a finite region")
    which = so.add_mutually_exclusive_group(required=True)
    which.add_argument("--patch", help="WxH vertex block")
    which.add_argument("--gs", action="store_true", help="all edges touching one K4")
    which.add_argument("--g", action="store_true", help="the 6x6 block around one K4")
    so.add_argument("--n", type=int, help="decide this span instead of minimizing")
    so.set_defaults(func=cmd_solve)

    pe = sub.add_parser("periodic", parents=[common, search], help="search a periodic labeling")
    group = pe.add_mutually_exclusive_group()
    group.add_argument("--period", help="PxQ torus, at least 6x6")
    group.add_argument("--sweep", action="store_true", help="try periods by increasing area")
    group.add_argument("--linear", action="store_true",
                       help="exhaust labelings (a*x + b*y + offset[class]) mod (n+1) instead of a torus")
    pe.add_argument("--max-period", type=int, default=12, help="largest side tried by --sweep")
    pe.add_argument("--n", type=int, default=28)
    pe.set_defaults(func=cmd_periodic)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "n", None) is not None and args.n < 0:
            raise UsageError("--n must be non-negative")
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        out = args.func(args)
    except UsageError as exc:
        out = CommandOutcome(EXIT_USAGE, {"error": str(exc)}, f"error: {exc}")
    if args.format == "json":
        print(json.dumps(out.payload, indent=2))
    else:
        print(out.text)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
