"""Command-line front end.

Exit codes: 0 success (bounded passes included), 1 mathematical failure,
2 usage or infrastructure error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .groups import DecompositionError, decompose_uN, element_order, evaluate_word, make_generators
from .ideals import VARIANTS, BurnsideParams, NotPrimePower, RankRestriction, UnsaturatedError
from .matrix import IntegerSpecialization, LaurentRing, RingMatrix
from .quotient import SRing, build_quotient_S
from .verifier import (
    ALL_SUITES,
    ConfigError,
    SuiteSpec,
    assemble_report,
    default_jobs,
    dumps,
    iter_witnesses,
    replay_witness,
    run_suite,
    text_summary,
)
from .words import WordSyntaxError, as_expr, parse_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# config-file keys and their types; flags override file values
CONFIG_KEYS = {
    "q": int, "k": int, "c": int, "series-d": int, "samples": int, "seed": int, "unit-bound": int,
    "variant": str, "cache-dir": str, "jobs": int, "format": str, "out": str, "max-length": int,
}


class UsageError(Exception):
    pass


def read_config(path: str) -> Dict[str, object]:
    """Parse a ``key=value`` file; ``#`` starts a comment."""
    out: Dict[str, object] = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("_", "-")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{n}: bad value for {key}: {value!r}") from None
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; flags override its values")
    p.add_argument("--q", type=int, help="prime power q (default 2)")
    p.add_argument("--k", type=int, help="rank (default 2)")
    p.add_argument("--c", type=int, help="augmentation truncation order")
    p.add_argument("--series-d", type=int, dest="series_d", help="(t-1)-series truncation order D")
    p.add_argument("--samples", type=int, help="sample count override")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--unit-bound", type=int, dest="unit_bound", help="starting unit bound B for saturation")
    p.add_argument("--variant", choices=VARIANTS, help="whether the unit u = 1 generates I(q)")
    p.add_argument("--cache-dir", dest="cache_dir", help="directory for lattice cache files")
    p.add_argument("--jobs", type=int, help="worker processes (default: available cores)")
    p.add_argument("--format", choices=("json", "text"), help="output format (default text)")
    p.add_argument("--out", help="write the report here")
    p.add_argument("--max-length", type=int, dest="max_length", help="base word length budget")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="burnside", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", help=f"suite id or 'all' ({', '.join(ALL_SUITES)})")
    p.add_argument("--all-q", action="store_true", help="with 'all' and no --q: run q = 2, 3, 4, 5")
    _common(p)

    p = sub.add_parser("eval", help="evaluate a word as a matrix")
    p.add_argument("word")
    p.add_argument("--ring", default="R", help="R, S, sanov (R and S carry t unless --t 1)")
    p.add_argument("--t", type=int, choices=(1,), help="specialize t = 1")
    _common(p)

    p = sub.add_parser("order", help="order of a word's image in S(q)[t, t^-1]")
    p.add_argument("word")
    p.add_argument("--cap", type=int, help="largest exponent tried (default q)")
    _common(p)

    p = sub.add_parser("ring-info", help="structure of S(q)")
    _common(p)

    p = sub.add_parser("decompose", help="u I + N decomposition of a word at t = 1")
    p.add_argument("word")
    _common(p)

    p = sub.add_parser("replay", help="re-run the witnesses stored in a report")
    p.add_argument("report", help="report JSON (or a single witness JSON)")
    _common(p)
    return parser


def effective_config(args: argparse.Namespace) -> Dict[str, object]:
    cfg: Dict[str, object] = read_config(args.config) if getattr(args, "config", None) else {}
    for key in CONFIG_KEYS:
        v = getattr(args, key.replace("-", "_"), None)
        if v is not None:
            cfg[key] = v
    cfg.setdefault("q", 2)
    cfg.setdefault("k", 2)
    cfg.setdefault("seed", 0)
    cfg.setdefault("unit-bound", 1)
    cfg.setdefault("variant", "include-unit-1")
    cfg.setdefault("format", "text")
    return cfg


def _spec(suite: str, q: int, cfg: Dict[str, object], jobs: int) -> SuiteSpec:
    return SuiteSpec(
        suite, q=q, k=cfg["k"], c=cfg.get("c"), D=cfg.get("series-d"), samples=cfg.get("samples"),
        seed=cfg["seed"], unit_bound=cfg["unit-bound"], variant=cfg["variant"], max_length=cfg.get("max-length"),
        jobs=jobs, cache_dir=cfg.get("cache-dir"),
    )


def _emit(text: str, cfg: Dict[str, object], report_text: Optional[str] = None) -> None:
    out = cfg.get("out")
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(report_text if report_text is not None else text)
    sys.stdout.write(text)


def cmd_verify(args, cfg) -> int:
    suites = list(ALL_SUITES[:-1]) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in ALL_SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}")
    q_given = args.q is not None or bool(args.config and "q" in read_config(args.config))
    if q_given:
        qs = [cfg["q"]]
    else:
        qs = [2, 3, 4, 5] if args.all_q else ([2, 3] if args.suite == "all" else [2])
    jobs = cfg.get("jobs") or default_jobs()
    specs = [_spec(s, q, cfg, jobs) for q in qs for s in suites]
    for s in specs:
        s.validate()
    reports = []
    start = time.perf_counter()
    for s in specs:
        rep = run_suite(s)
        reports.append(rep)
        if cfg["format"] == "text":
            flag = "" if rep.blocking else " (report only)"
            sys.stderr.write(f"{rep.suite} q={s.q}: {rep.verdict}{flag}\n")
    echoed = {k: v for k, v in cfg.items() if k not in ("out", "format", "q")}
    echoed["qs"] = qs
    report = assemble_report(reports, echoed, time.perf_counter() - start)
    body = dumps(report)
    text = body if cfg["format"] == "json" else text_summary(report)
    _emit(text, cfg, body)
    bounded = report["summary"]["verdicts"]["bounded-pass"]
    if cfg["format"] == "text" and bounded:
        sys.stdout.write(f"note: {bounded} suite(s) confirmed only modulo a truncation (bounded-pass)\n")
    return report["summary"]["exit_code"]


def _ring(name: str, t1: bool, cfg):
    k = cfg["k"]
    if name in ("R", "R[t]"):
        return LaurentRing(k, with_t=not t1)
    if name in ("S", "S[t]"):
        S = build_quotient_S(BurnsideParams.from_q(cfg["q"]), variant=cfg["variant"], k=k,
                             cache_dir=cfg.get("cache-dir"), B=cfg["unit-bound"])
        return SRing(S, with_t=not t1)
    if name == "sanov":
        return IntegerSpecialization.sanov(k)
    raise UsageError(f"unknown ring {name!r} (choose R, S or sanov)")


def cmd_eval(args, cfg) -> int:
    expr = parse_word(args.word)
    ring = _ring(args.ring, args.t == 1, cfg)
    W = evaluate_word(expr, ring, make_generators(cfg["k"]))
    lines = [W.to_text()]
    if args.ring in ("R", "R[t]") and args.t == 1:
        try:
            dec = decompose_uN(W)
            lams = ", ".join(f"lambda_{i} = {lam}" for i, lam in enumerate(dec.lambdas, 1))
            lines.append(f"u = {dec.u}; {lams}")
        except DecompositionError:
            pass
    if cfg["format"] == "json":
        text = json.dumps({"word": str(expr), "ring": getattr(ring, "name", args.ring), "matrix": lines[0],
                           "extra": lines[1:]}, indent=2) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    _emit(text, cfg)
    return EXIT_OK


def cmd_order(args, cfg) -> int:
    expr = parse_word(args.word)
    params = BurnsideParams.from_q(cfg["q"])
    S = build_quotient_S(params, variant=cfg["variant"], k=cfg["k"], cache_dir=cfg.get("cache-dir"),
                         B=cfg["unit-bound"])
    gens = make_generators(cfg["k"])
    res = element_order(expr, SRing(S, True), cap=args.cap, gens=gens)
    out = {"word": str(expr), "q": params.q, "verdict": res.kind, "order": res.order, "t_sum": res.t_sum,
           "text": res.describe()}
    status = EXIT_OK
    if res.kind == "infinite":
        ring = SRing(S, False)
        W = evaluate_word(expr, ring, gens)
        ok = W ** params.q == RingMatrix.identity(ring, cfg["k"])
        out["power_q_at_t1_is_identity"] = ok
        out["text"] += f"; (word)^{params.q} at t = 1 {'equals' if ok else 'does NOT equal'} I over S({params.q})"
        if not ok:
            status = EXIT_FAIL
    elif res.kind == "unknown":
        out["text"] += "; neither certificate applies"
        status = EXIT_FAIL
    elif res.order and params.q % res.order:
        out["text"] += f"; order does not divide q = {params.q}"
        status = EXIT_FAIL
    text = json.dumps(out, indent=2) + "\n" if cfg["format"] == "json" else out["text"] + "\n"
    _emit(text, cfg)
    return status


def cmd_ring_info(args, cfg) -> int:
    params = BurnsideParams.from_q(cfg["q"])
    c0 = cfg.get("c")
    S = build_quotient_S(params, c0=c0, variant=cfg["variant"], k=cfg["k"], cache_dir=cfg.get("cache-dir"),
                         B=cfg["unit-bound"])
    info = S.describe()
    info["ideal_closed"] = S.is_ideal_closed()
    if cfg["format"] == "json":
        text = json.dumps(info, indent=2) + "\n"
    else:
        divs = " + ".join(f"Z/{d}" for d in info["elementary_divisors"])
        free = " + ".join(["Z"] * info["free_rank"])
        lines = [
            f"S({params.q}) = R / I({params.q}) Sigma   [variant {info['variant']}]",
            f"c0 = {info['c0']} (truncation modulo Sigma^c0), rank k = {info['k']}",
            f"saturation: unit bound B = {info['unit_bound_B']}, examined up to {info['unit_bound_examined']}",
            f"additive group: {' + '.join(x for x in (free, divs) if x) or '0'}",
            f"free rank {info['free_rank']}, elementary divisors {tuple(info['elementary_divisors'])}",
            f"basis monomials (x_i = 1 + a_i): {', '.join(info['basis_monomials'])}",
            f"lattice rows: {'; '.join(info['lattice_rows'])}",
            f"lattice sha256: {info['cache_sha256']}",
            f"trusted: {info['trusted'][0]}",
        ]
        text = "\n".join(lines) + "\n"
    _emit(text, cfg)
    return EXIT_OK


def cmd_decompose(args, cfg) -> int:
    expr = parse_word(args.word)
    k = max(cfg["k"], as_expr(expr).max_generator())
    W = evaluate_word(expr, LaurentRing(k, with_t=False), make_generators(k))
    try:
        dec = decompose_uN(W)
    except DecompositionError as exc:
        sys.stdout.write(f"not of the form u I + N: {exc}\n")
        return EXIT_FAIL
    out = {
        "word": str(expr),
        "u": str(dec.u),
        "lambdas": [str(l) for l in dec.lambdas],
        "v": [str(x) for x in dec.v],
        "relation": "sum lambda_i (1 - x_i) = 1 - u holds",
        "row_fixed": "v M = v holds",
    }
    if cfg["format"] == "json":
        text = json.dumps(out, indent=2) + "\n"
    else:
        text = "\n".join([f"u = {out['u']}"] + [f"lambda_{i} = {l}" for i, l in enumerate(out["lambdas"], 1)]
                         + [out["relation"], out["row_fixed"]]) + "\n"
    _emit(text, cfg)
    return EXIT_OK


def cmd_replay(args, cfg) -> int:
    data = json.loads(Path(args.report).read_text())
    if "suites" in data:
        items = [(s, p["name"], w) for s, p, w in iter_witnesses(data)]
    else:
        items = [("witness", "", data)]
    if not items:
        sys.stdout.write("no witnesses in report\n")
        return EXIT_OK
    status = EXIT_OK
    lines = []
    for suite, part, w in items:
        ok, detail = replay_witness(w)
        if not ok:
            status = EXIT_FAIL
        verdict = "PASS" if ok else "FAIL"
        target = w.get("word") or w.get("detail")
        lines.append(f"{suite} / {part} [{w['kind']}] {target}: {verdict}" + (f" ({detail})" if detail else ""))
    _emit("\n".join(lines) + "\n", cfg)
    return status


COMMANDS = {
    "verify": cmd_verify, "eval": cmd_eval, "order": cmd_order, "ring-info": cmd_ring_info,
    "decompose": cmd_decompose, "replay": cmd_replay,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = effective_config(args)
        return COMMANDS[args.command](args, cfg)
    except NotPrimePower as exc:
        sys.stderr.write(f"error: not a prime power: {exc}\n")
    except UnsaturatedError as exc:
        sys.stderr.write(f"error: {exc}\nstabilization history: {exc.history}\n")
    except (ConfigError, UsageError, RankRestriction, WordSyntaxError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
