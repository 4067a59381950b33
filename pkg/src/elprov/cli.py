"""Command-line front end.

Exit codes: 0 entailed / success, 1 not entailed, 2 error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import ara as ara_mod
from .behaviour import (
    BudgetExceeded,
    Engine,
    EngineConfig,
    Reasoner,
    TruncatedError,
    ara_stack,
)
from .families import sword_tbox
from .semiring import Mode, render_word
from .syntax import AtomicGCI, TBoxError, parse_goal, parse_query, parse_tbox

EXIT_OK = 0
EXIT_NO = 1
EXIT_ERROR = 2


class CliError(Exception):
    pass


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_tbox(text)


def _config(args) -> EngineConfig:
    return EngineConfig(
        mode=Mode(args.mode),
        engine=Engine(getattr(args, "engine", "ara")),
        max_iterations=args.max_iterations,
    )


def cmd_prove(args) -> int:
    tbox = _load(args.tbox)
    goal, word = parse_query(args.query)
    config = _config(args)
    start = time.perf_counter()
    res = Reasoner(tbox, config).entails(goal, word)
    elapsed = time.perf_counter() - start
    record = {
        "query": args.query,
        "goal": str(goal),
        "monomial": str(res.monomial),
        "entailed": res.entailed,
        "witness_word": None if res.witness_word is None else render_word(res.witness_word),
        "witness_ordering": None if res.witness_ordering is None else list(res.witness_ordering),
        "engine": config.engine.value,
        "mode": config.mode.value,
        "iterations": res.iterations,
        "orderings_checked": res.orderings_checked,
        "wall_time": round(elapsed, 6),
    }
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        verdict = "entailed" if res.entailed else "not entailed"
        line = f"{goal} : {res.monomial}  {verdict}"
        if res.witness_word is not None:
            line += f"  witness={record['witness_word']} ordering={','.join(res.witness_ordering) or '-'}"
        print(line)
    return EXIT_OK if res.entailed else EXIT_NO


def cmd_monomials(args) -> int:
    tbox = _load(args.tbox)
    goal = parse_goal(args.goal)
    monos = Reasoner(tbox, _config(args)).monomials(goal)
    shown = monos if args.limit is None else monos[: args.limit]
    for m in shown:
        print(m)
    if len(shown) < len(monos):
        print(f"... ({len(monos) - len(shown)} more)")
    return EXIT_OK


def cmd_dump_ara(args) -> int:
    tbox = _load(args.tbox)
    goal = parse_goal(args.goal)
    if args.iterations is None:
        stack = Reasoner(tbox, _config(args)).stack(goal)
    else:
        if args.iterations < 0:
            raise CliError("--iterations must be non-negative")
        stack = ara_stack(tbox, goal, args.iterations)
    if args.format == "json":
        print(json.dumps(ara_mod.to_json(stack.ara), sort_keys=True, ensure_ascii=False))
    else:
        sys.stdout.write(ara_mod.to_dot(stack.ara))
    return EXIT_OK


def cmd_bench(args) -> int:
    n = args.n
    if n < 1:
        raise CliError("-n must be at least 1")
    report: dict = {"kind": args.kind, "n": n}
    start = time.perf_counter()
    if args.kind == "sword":
        tbox = sword_tbox(n)
        out = args.out or f"sword{n}.tbox"
        Path(out).write_text(tbox.to_text(), encoding="utf-8")
        report["tbox_file"] = out
        goal = AtomicGCI("A0", f"A{n}")
        reasoner = Reasoner(tbox, EngineConfig())
        report["monomials"] = len(reasoner.monomials(goal))
        stack = reasoner.stack(goal)
        report["iterations"] = stack.iterations
        report["ara_states"] = stack.size
        report["ara_automata"] = len(stack.ara.automata)
    else:
        fam = ara_mod.power_family(n)
        report["states"] = fam.size
        probes = {}
        for length in (2 ** n - 1, 2 ** n, 2 ** n + 1):
            probes[str(length)] = ara_mod.membership(fam, "a" * length)
        report["accepts"] = probes
    report["wall_time"] = round(time.perf_counter() - start, 6)
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for key, value in report.items():
            if isinstance(value, dict):
                value = " ".join(f"a^{k}={'yes' if v else 'no'}" for k, v in value.items())
            print(f"{key}: {value}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elprov", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def engine_flags(p, with_engine=True):
        p.add_argument("--mode", choices=[m.value for m in Mode], default="trio")
        if with_engine:
            p.add_argument("--engine", choices=[e.value for e in Engine], default="ara")
        p.add_argument("--max-iterations", type=int, default=None)

    p = sub.add_parser("prove", help="decide whether a monomial is entailed for a subsumption")
    p.add_argument("tbox")
    p.add_argument("-q", "--query", required=True, help='e.g. "A <= D : u*v*w"')
    engine_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("monomials", help="list all entailed monomials of a goal")
    p.add_argument("tbox")
    p.add_argument("-g", "--goal", required=True)
    engine_flags(p, with_engine=False)
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_monomials)

    p = sub.add_parser("dump-ara", help="print the behaviour ARA of a goal")
    p.add_argument("tbox")
    p.add_argument("-g", "--goal", required=True)
    engine_flags(p, with_engine=False)
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.add_argument("--iterations", type=int, default=None)
    p.set_defaults(func=cmd_dump_ara)

    p = sub.add_parser("bench", help="generate a benchmark family and measure it")
    p.add_argument("kind", choices=["sword", "power"])
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--out", default=None, help="where to write the generated TBox (sword only; default swordN.tbox)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (CliError, TBoxError, TruncatedError, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
