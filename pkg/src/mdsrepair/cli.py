"""Command line surface for constructing, checking and simulating codes.

Exit codes separate operational trouble from mathematical trouble: 0
means the requested check or report succeeded, 2 means a verification
ran and failed (a real counterexample or a corrupted input code), and 1
means the invocation itself was unusable (bad flags, unreadable files).
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .code import ArrayCode, deserialize, is_mds, serialize
from .constructions import (
    build_exceptional,
    build_two_parity_code,
    check_block_intersection_bound,
    regular_spread_converse_check,
)
from .geometry import INF, desarguesian_spread, is_regular_spread, is_spread, regulus_through
from .linalg import DEFAULT_ENUM_BUDGET
from .repair import (
    RepairReport,
    counting_bound,
    optimal_alpha,
    repair_report,
    verify_strictness_sweep,
)
from .sim import erase_and_repair, sample_codeword

FORMATS = ("table", "csv", "structured")


@dataclass(frozen=True)
class RunConfig:
    """Parsed invocation: the subcommand pair plus the shared knobs."""

    command: str
    action: str | None
    fmt: str
    budget: int
    seed: int
    args: argparse.Namespace

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise ValueError("budget must be at least 1")


class _Parser(argparse.ArgumentParser):
    """argparse, but usage problems exit 1 instead of argparse's 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.exit(1, f"{self.prog}: error: {message}\n")


def _use_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _verdict(ok: bool) -> str:
    word = "ok" if ok else "FAIL"
    if _use_color():
        return f"\x1b[32m{word}\x1b[0m" if ok else f"\x1b[31m{word}\x1b[0m"
    return word


def _load_code(path: str | None) -> ArrayCode:
    try:
        text = sys.stdin.read() if path in (None, "-") else Path(path).read_text()
    except OSError as exc:
        raise SystemExit(f"cannot read code file: {exc}")
    try:
        return deserialize(text)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise SystemExit(f"not a readable code file: {exc}")


def _emit_code(code: ArrayCode, out: str | None) -> None:
    text = serialize(code)
    if out in (None, "-"):
        sys.stdout.write(text + "\n")
    else:
        Path(out).write_text(text + "\n")
        print(f"wrote ({code.n}, {code.k}, {code.ell}) code over GF({code.field.q}) to {out}")


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _report_rows(report: RepairReport) -> list[dict]:
    rows = []
    for nd in report.nodes:
        rows.append(
            {
                "node": nd.node,
                "alpha": nd.alpha,
                "lambda": nd.lam,
                "beta": nd.beta,
                "gamma": nd.gamma,
                "bw_at_bound": nd.attains_bw_bound,
                "io_at_bound": nd.attains_io_bound,
            }
        )
    return rows


def _print_report(report: RepairReport, fmt: str) -> None:
    rows = _report_rows(report)
    if fmt == "csv":
        w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
        return
    if fmt == "structured":
        payload = {
            "n": report.n,
            "k": report.k,
            "ell": report.ell,
            "q": report.q,
            "bound": report.bound,
            "exhaustive": report.exhaustive,
            "candidates_scanned": report.candidates_scanned,
            "candidates_total": report.candidates_total,
            "nodes": rows,
            "beta_avg": _frac(report.beta_avg),
            "beta_max": report.beta_max,
            "gamma_avg": _frac(report.gamma_avg),
            "gamma_max": report.gamma_max,
            "code_attains_bw": report.code_attains_bw,
            "code_attains_io": report.code_attains_io,
            "anomalies": list(report.anomalies),
        }
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return
    scan = "exhaustive" if report.exhaustive else "partial"
    print(
        f"({report.n}, {report.k}, {report.ell}) over GF({report.q}): "
        f"bound {report.bound}, scanned {report.candidates_scanned}/"
        f"{report.candidates_total} candidates ({scan})"
    )
    head = f"{'node':>4} {'alpha':>5} {'lambda':>6} {'beta':>5} {'gamma':>5}  bw@bound io@bound"
    print(head)
    for r in rows:
        print(
            f"{r['node']:>4} {r['alpha']:>5} {r['lambda']:>6} {r['beta']:>5} "
            f"{r['gamma']:>5}  {str(r['bw_at_bound']):>8} {str(r['io_at_bound']):>8}"
        )
    print(
        f"beta_avg {_frac(report.beta_avg)}  beta_max {report.beta_max}  "
        f"gamma_avg {_frac(report.gamma_avg)}  gamma_max {report.gamma_max}"
    )
    if report.exhaustive:
        print(
            f"code attains bandwidth bound: {report.code_attains_bw}, "
            f"I/O bound: {report.code_attains_io}"
        )
    else:
        print("attainment flags unknown: search was not exhaustive")
    for a in report.anomalies:
        print(f"anomaly: {a}")


def _parse_label(token: str):
    if token.lower() in ("inf", "infinity", "oo"):
        return INF
    return int(token)


def _read_family(path: str) -> list[frozenset]:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise SystemExit(f"cannot read family file: {exc}")
    blocks = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            blocks.append(frozenset(_parse_label(t) for t in line.split()))
        except ValueError:
            raise SystemExit(f"bad block line: {line!r}")
    if not blocks:
        raise SystemExit("family file holds no blocks")
    return blocks


def _build_parser() -> _Parser:
    p = _Parser(prog="mdsrepair", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="print the counting bound")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--ell", type=int, required=True)
    b.add_argument("--q", type=int, required=True)

    c = sub.add_parser("construct", help="build a bound attaining code")
    csub = c.add_subparsers(dest="action", required=True)
    cd = csub.add_parser("desarguesian", help="two parity code on the field spread")
    cd.add_argument("--q", type=int, required=True)
    cd.add_argument("--ell", type=int, default=2)
    cd.add_argument("--n", type=int, required=True)
    cd.add_argument("--out", default=None)
    ce = csub.add_parser("exceptional", help="one of the three short codes")
    ce.add_argument("--case", choices=("q3n6", "q3n7", "q4n9"), required=True)
    ce.add_argument("--out", default=None)

    v = sub.add_parser("verify", help="verify a stored code")
    vsub = v.add_subparsers(dest="action", required=True)
    vm = vsub.add_parser("mds", help="check every r-subset of blocks is invertible")
    vm.add_argument("--code", default=None, help="code file, default stdin")

    r = sub.add_parser("repair", help="repair analysis")
    rsub = r.add_subparsers(dest="action", required=True)
    ra = rsub.add_parser("analyze", help="per node optimal bandwidth and I/O")
    ra.add_argument("--code", default=None, help="code file, default stdin")
    ra.add_argument("--budget", type=int, default=DEFAULT_ENUM_BUDGET)
    ra.add_argument("--format", choices=FORMATS, default="table")

    g = sub.add_parser("geometry", help="spread and regulus checks")
    gsub = g.add_subparsers(dest="action", required=True)
    gs = gsub.add_parser("spread-check", help="verify the field spread partitions the space")
    gs.add_argument("--q", type=int, required=True)
    gs.add_argument("--ell", type=int, default=2)
    gr = gsub.add_parser("regulus", help="regulus through three members of the field spread")
    gr.add_argument("--q", type=int, required=True)
    gr.add_argument("--members", type=int, nargs=3, required=True, metavar="IDX")
    gg = gsub.add_parser("regular", help="check the field spread is closed under reguli")
    gg.add_argument("--q", type=int, required=True)
    gg.add_argument("--sample", type=int, default=None)
    gg.add_argument("--seed", type=int, default=0)

    k = sub.add_parser("check", help="verify a paper level statement")
    ksub = k.add_subparsers(dest="action", required=True)
    kc = ksub.add_parser("lemma-c1", help="block family ground set bound")
    kc.add_argument("--family", required=True, help="one block per line, space separated")
    ks = ksub.add_parser("strictness", help="r >= 3 codes sit strictly above the bound")
    ks.add_argument("--q", type=int, default=2)
    ks.add_argument("--ell", type=int, default=2)
    ks.add_argument("--r", type=int, default=3)
    ks.add_argument("--trials", type=int, default=50)
    ks.add_argument("--seed", type=int, default=0)
    kv = ksub.add_parser("converse", help="spread coded attainment needs n above the threshold")
    kv.add_argument("--q", type=int, required=True, choices=(3, 4))
    kv.add_argument("--samples", type=int, default=150)
    kv.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("simulate", help="run repair trials on sampled codewords")
    ssub = s.add_subparsers(dest="action", required=True)
    sr = ssub.add_parser("repair", help="erase one node and rebuild it")
    sr.add_argument("--code", default=None, help="code file, default stdin")
    sr.add_argument("--node", type=int, required=True)
    sr.add_argument("--seed", type=int, default=0)
    sr.add_argument("--trials", type=int, default=1)
    sr.add_argument("--budget", type=int, default=DEFAULT_ENUM_BUDGET)
    return p


def _cmd_bound(cfg: RunConfig) -> int:
    a = cfg.args
    print(counting_bound(a.n, a.r, a.ell, a.q))
    return 0


def _cmd_construct(cfg: RunConfig) -> int:
    a = cfg.args
    if cfg.action == "desarguesian":
        code, _, _ = build_two_parity_code(a.q, a.ell, a.n)
    else:
        code, _ = build_exceptional(a.case)
    _emit_code(code, a.out)
    return 0


def _cmd_verify(cfg: RunConfig) -> int:
    code = _load_code(cfg.args.code)
    check = is_mds(code)
    if check.ok:
        print(f"mds {_verdict(True)}: all {code.n} choose {code.r} block subsets invertible")
        return 0
    print(f"mds {_verdict(False)}: blocks {check.failing_subset} are not independent")
    return 2


def _cmd_repair(cfg: RunConfig) -> int:
    code = _load_code(cfg.args.code)
    report = repair_report(code, budget=cfg.budget)
    _print_report(report, cfg.fmt)
    return 0


def _cmd_geometry(cfg: RunConfig) -> int:
    a = cfg.args
    if cfg.action == "spread-check":
        spread = desarguesian_spread(a.q, a.ell)
        check = is_spread(spread.field, spread.ell, spread.members)
        print(
            f"field spread of PG({2 * a.ell - 1}, {a.q}): {len(spread)} members, "
            f"{_verdict(bool(check))}" + ("" if check.ok else f" ({check.reason})")
        )
        return 0 if check.ok else 2
    if cfg.action == "regulus":
        spread = desarguesian_spread(a.q, 2)
        idx = a.members
        if len(set(idx)) != 3 or not all(0 <= i < len(spread) for i in idx):
            raise SystemExit("need three distinct member indices in range")
        reg = regulus_through(*(spread.members[i] for i in idx))
        inside = sum(1 for line in reg.lines if line in spread.members)
        print(
            f"regulus through members {idx}: {len(reg.lines)} lines, "
            f"{len(reg.transversals)} transversals, {inside} lines inside the spread"
        )
        return 0
    spread = desarguesian_spread(a.q, 2)
    check = is_regular_spread(spread, sample=a.sample, seed=a.seed)
    print(
        f"regular spread check ({check.mode}, {check.triples_checked} triples): "
        f"{_verdict(bool(check))}"
    )
    return 0 if check.ok else 2


def _cmd_check(cfg: RunConfig) -> int:
    a = cfg.args
    if cfg.action == "lemma-c1":
        family = _read_family(a.family)
        holds, cert = check_block_intersection_bound(family)
        if not holds:
            print(f"hypotheses violated: {cert.violation} {_verdict(False)}")
            return 2
        core = [sorted(b, key=str) for b in cert.core]
        print(
            f"t = {cert.t}: {cert.n_effective} ground points >= min(2t, 3t-6) = "
            f"{cert.bound} {_verdict(True)}; empty core of {len(core)} blocks: {core}"
        )
        return 0
    if cfg.action == "strictness":
        result = verify_strictness_sweep(a.q, a.ell, a.r, trials=a.trials, seed=a.seed)
        good = result.ok and not result.equality_cases
        print(
            f"{result.codes_tested} codes over GF({a.q}) with r = {a.r}: min slack "
            f"{result.min_slack}, {len(result.equality_cases)} equality cases, "
            f"{len(result.violations)} violations {_verdict(good)}"
        )
        return 0 if good else 2
    report = regular_spread_converse_check(a.q, samples=a.samples, seed=a.seed)
    for f in report.forward:
        print(
            f"n={f.n}: bound {f.bound}, beta ({_frac(f.beta_avg)}, {f.beta_max}), "
            f"gamma ({_frac(f.gamma_avg)}, {f.gamma_max}), attained {f.attained}"
        )
    for c in report.converse:
        print(
            f"n={c.n} ({c.mode}, {c.subsets} subsets): {c.node_attaining} with an "
            f"attaining node, {c.code_attaining} fully attaining"
        )
    print(f"converse {_verdict(report.ok)}: attainment needs n >= {report.lo}")
    return 0 if report.ok else 2


def _cmd_simulate(cfg: RunConfig) -> int:
    a = cfg.args
    code = _load_code(a.code)
    if not 0 <= a.node < code.n:
        raise SystemExit(f"node must lie in [0, {code.n})")
    _, witness = optimal_alpha(code, a.node, budget=cfg.budget)
    failures = 0
    for t in range(a.trials):
        cw = sample_codeword(code, a.seed + t)
        trace = erase_and_repair(code, cw, a.node, witness)
        print(
            f"trial {t} (seed {a.seed + t}): downloaded {trace.total_downloaded}, "
            f"accessed {trace.total_accessed}, match {trace.match}"
        )
        failures += not trace.match
    print(
        f"{a.trials - failures}/{a.trials} trials recovered node {a.node} exactly "
        f"{_verdict(failures == 0)}"
    )
    return 0 if failures == 0 else 2


_HANDLERS = {
    "bound": _cmd_bound,
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "repair": _cmd_repair,
    "geometry": _cmd_geometry,
    "check": _cmd_check,
    "simulate": _cmd_simulate,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        cfg = RunConfig(
            command=ns.command,
            action=getattr(ns, "action", None),
            fmt=getattr(ns, "format", "table"),
            budget=getattr(ns, "budget", DEFAULT_ENUM_BUDGET),
            seed=getattr(ns, "seed", 0),
            args=ns,
        )
        return _HANDLERS[ns.command](cfg)
    except SystemExit as exc:
        if isinstance(exc.code, int):
            return exc.code
        print(f"mdsrepair: error: {exc.code}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"mdsrepair: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    code = run()
    raise SystemExit(code)


if __name__ == "__main__":
    main()
