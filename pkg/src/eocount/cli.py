"""Command-line front end: ``eocount classify|decide|eval|gen|transform``."""
from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from .builtins import BUILTINS, FAMILIES, GRID_BUILTINS, gen_builtin, gen_random
from .classify import classify, first_eom_pairing
from .csp import CSPError
from .deciders import UNDECIDED, decide
from .errors import InvariantViolation, Undecided
from .grid import (
    BRUTE_FORCE_BUDGET,
    EOGrid,
    GridFormatError,
    dual_grid,
    load,
    pi_transform,
    serialize,
    tau_set,
)
from .pipelines import STRATEGIES, evaluate
from .rebalance import DEFAULT_STATE_BUDGET
from .signature import Signature, SignatureError, check_pairing

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2
EXIT_REFUSED = 3


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj: object) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _signature_set(sigs: dict[str, Signature]) -> EOGrid:
    return EOGrid(sigs, [], [])


def _selected(g: EOGrid, name: str | None) -> dict[str, Signature]:
    if name is None:
        return dict(sorted(g.signatures.items()))
    if name not in g.signatures:
        raise SignatureError(f"no signature named {name!r}")
    return {name: g.signatures[name]}


def cmd_classify(args: argparse.Namespace) -> int:
    g = load(args.file, validate=False)
    budget = args.budget or DEFAULT_STATE_BUDGET
    reports = [classify(f, n, budget).to_json() for n, f in _selected(g, args.name).items()]
    _emit(_dump(reports), args.output)
    return EXIT_OK


def cmd_decide(args: argparse.Namespace) -> int:
    g = load(args.file, validate=False)
    verdict = decide(g.used_signatures() if g.vertices else dict(g.signatures),
                     args.budget or DEFAULT_STATE_BUDGET)
    _emit(_dump(verdict.to_json()), args.output)
    if verdict.outcome == UNDECIDED:
        print(f"undecided: {verdict.reason}", file=sys.stderr)
        return EXIT_REFUSED
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    g = load(args.file)
    result = evaluate(g, args.strategy, args.budget or BRUTE_FORCE_BUDGET)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.json:
        out = result.to_json()
        if not args.trace:
            out.pop("steps")
        _emit(_dump(out), args.output)
    else:
        text = f"{result.value}\n"
        if args.trace:
            text += _dump(result.to_json())
        _emit(text, args.output)
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.name in FAMILIES:
        made = gen_random(args.name, seed=args.seed, arity=args.arity, typing=args.typing,
                          count=args.count, max_vertices=args.max_vertices)
        obj = made.obj
    elif args.name in BUILTINS or args.name in GRID_BUILTINS:
        obj = gen_builtin(args.name, args.params)
    else:
        raise SignatureError(f"unknown builtin or family {args.name!r}")
    if isinstance(obj, Signature):
        obj = _signature_set({args.name.replace("-", "_"): obj})
    _emit(serialize(obj), args.output)
    return EXIT_OK


def _parse_pairing(text: str) -> list[tuple[int, int]]:
    pairs = []
    for chunk in text.split(";"):
        a, b = chunk.split(",")
        pairs.append((int(a), int(b)))
    return pairs


def cmd_transform(args: argparse.Namespace) -> int:
    g = load(args.file, validate=False)
    if args.kind == "dual":
        out = dual_grid(g)
    elif args.kind == "pi":
        out = _signature_set({n: pi_transform(f) for n, f in sorted(g.signatures.items())})
    else:
        sigs = {}
        for n, f in sorted(g.signatures.items()):
            if args.pairing:
                pairing = check_pairing(_parse_pairing(args.pairing), f.arity)
            else:
                pairing = first_eom_pairing(f)
                if pairing is None:
                    raise SignatureError(f"{n} has no EOM pairing")
            for k, h in enumerate(tau_set(f, pairing)):
                sigs[f"{n}_tau{k}"] = h
        out = _signature_set(sigs)
    _emit(serialize(out), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eocount", description="Exact Eulerian-orientation counting.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        sp.add_argument("--budget", type=int, default=None, help="work budget (states or combinations)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("classify", help="class membership report per signature")
    sp.add_argument("file")
    sp.add_argument("--name", help="only this signature")
    common(sp)
    sp.set_defaults(run=cmd_classify)

    sp = sub.add_parser("decide", help="complexity verdict for the file's signature set")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(run=cmd_decide)

    sp = sub.add_parser("eval", help="exact partition function of a grid")
    sp.add_argument("file")
    sp.add_argument("--strategy", choices=STRATEGIES, default="auto")
    sp.add_argument("--trace", action="store_true", help="include the provenance report")
    common(sp)
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("gen", help="write a builtin signature or a seeded random instance")
    sp.add_argument("name", help=f"builtin ({', '.join(sorted(BUILTINS))}, "
                                 f"{', '.join(sorted(GRID_BUILTINS))}) or random family")
    sp.add_argument("params", nargs="*")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--arity", type=int, default=4)
    sp.add_argument("--typing", choices=("A", "P"), default=None)
    sp.add_argument("--count", type=int, default=2)
    sp.add_argument("--max-vertices", type=int, default=6)
    common(sp)
    sp.set_defaults(run=cmd_gen)

    sp = sub.add_parser("transform", help="dual grid, pi image or tau readings")
    sp.add_argument("kind", choices=("dual", "pi", "tau"))
    sp.add_argument("file")
    sp.add_argument("--pairing", help="pairing for tau, e.g. '1,3;2,4'")
    common(sp)
    sp.set_defaults(run=cmd_transform)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (GridFormatError, SignatureError, CSPError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except Undecided as exc:
        print(f"refused: {exc.reason}", file=sys.stderr)
        return EXIT_REFUSED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
