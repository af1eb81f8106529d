"""Command-line front end: ``petzlab check|ensemble|demo``."""

import argparse
from datetime import datetime, timezone
import json
import math
import os
import sys

from . import __version__
from .errors import RejectedInput
from .verify.ensemble import THEOREMS, run_ensemble

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_REJECTED = 0, 1, 2, 3

CONFIG_KEYS = {"theorem", "params", "trials", "seed", "tolerance", "output"}
PARAM_FLAGS = ("d", "n", "k", "m", "k_copies", "d_in", "d_out", "omega", "family", "variant")
THEOREM_ALIASES = {"thm14R": ("thm14", "R"), "thm14CL": ("thm14", "CL")}
SLACK_FIELDS = ("min_slack", "mean_slack")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _slack_literal(x):
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return f"{x:.15e}"


def render_report(doc):
    """JSON text with slack fields written as 16-significant-digit decimals."""
    plain = {k: (f"@@{k}@@" if k in SLACK_FIELDS else v) for k, v in doc.items()}
    text = json.dumps(plain, indent=2, sort_keys=False, default=_jsonable)
    for k in SLACK_FIELDS:
        if k in doc:
            text = text.replace(f'"@@{k}@@"', _slack_literal(doc[k]))
    return text + "\n"


def _jsonable(x):
    try:
        import numpy as np

        if isinstance(x, np.generic):
            return x.item()
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _clean(obj):
    """Make extras JSON-safe (numpy scalars, infinities)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def _add_common(p):
    p.add_argument("--theorem", help=f"one of {', '.join(THEOREMS)} (thm14R / thm14CL accepted)")
    p.add_argument("--config", help="JSON run config (theorem, params, trials, seed, tolerance, output)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $PETZLAB_SEED or 0)")
    p.add_argument("--tolerance", type=float, default=None, help="override the slack tolerance")
    p.add_argument("--output", "-o", help="write the JSON report here (default: stdout)")
    p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for reproducible output")
    p.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    for name in PARAM_FLAGS:
        flag = "--" + name.replace("_", "-")
        typ = str if name in ("omega", "family", "variant") else int
        p.add_argument(flag, dest=name, type=typ, default=None)


def build_parser():
    parser = _Parser(prog="petzlab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    check = sub.add_parser("check", help="run one theorem check")
    _add_common(check)
    ens = sub.add_parser("ensemble", help="run a seeded ensemble of checks")
    _add_common(ens)
    ens.add_argument("--trials", type=int, default=None)
    demo = sub.add_parser("demo", help="reproduce a closed-form value (werner, antisym, slater)")
    demo.add_argument("name")
    return parser


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return cfg


def resolve_run(args, ensemble):
    cfg = load_config(args.config) if args.config else {}
    theorem = args.theorem or cfg.get("theorem")
    if not theorem:
        raise UsageError("--theorem is required")
    params = dict(cfg.get("params", {}))
    for name in PARAM_FLAGS:
        val = getattr(args, name)
        if val is not None:
            params[name] = val
    if theorem in THEOREM_ALIASES:
        theorem, params["variant"] = THEOREM_ALIASES[theorem]
    if theorem not in THEOREMS:
        raise UsageError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")
    seed = args.seed if args.seed is not None else cfg.get("seed")
    if seed is None:
        seed = int(os.environ.get("PETZLAB_SEED", 0))
    trials = 1
    if ensemble:
        trials = args.trials if args.trials is not None else cfg.get("trials", 1)
        if trials < 1:
            raise UsageError("--trials must be at least 1")
    tolerance = args.tolerance if args.tolerance is not None else cfg.get("tolerance")
    output = args.output or cfg.get("output")
    return theorem, params, int(trials), int(seed), tolerance, output


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run(args, ensemble):
    theorem, params, trials, seed, tolerance, output = resolve_run(args, ensemble)
    try:
        seeds = None if ensemble else [seed]
        result = run_ensemble(theorem, params, trials, seed, workers=args.workers, seeds=seeds)
    except RejectedInput as exc:
        doc = {"theorem": theorem, "params": params, "seed": seed, "error": str(exc),
               "kind": type(exc).__name__, "defects": _clean(getattr(exc, "defects", {}))}
        _emit(json.dumps(doc, indent=2) + "\n", output)
        return EXIT_REJECTED
    if tolerance is not None:
        for r in result.reports:
            r.tolerance = float(tolerance)
    doc = result.summary()
    doc["version"] = __version__
    doc["timestamp"] = None if args.no_timestamp else datetime.now(timezone.utc).isoformat()
    if not ensemble:
        rep = result.reports[0]
        doc["report"] = _clean({k: v for k, v in rep.to_dict().items() if k not in ("theorem", "params")})
    _emit(render_report(_clean_top(doc)), output)
    return EXIT_PASS if result.failures == 0 else EXIT_FAIL


def _clean_top(doc):
    return {k: (v if k in SLACK_FIELDS else _clean(v)) for k, v in doc.items()}


def cmd_check(args):
    return _run(args, ensemble=False)


def cmd_ensemble(args):
    return _run(args, ensemble=True)


def cmd_demo(name):
    from .demos import DEMOS

    if name not in DEMOS:
        print(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}", file=sys.stderr)
        return EXIT_USAGE
    label, value, bound = DEMOS[name]()
    print(f"{label}")
    print(f"computed   {value:.15f}")
    print(f"closed form {bound:.15f}")
    print(f"difference {value - bound:.3e}")
    return EXIT_PASS


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "ensemble":
            return cmd_ensemble(args)
        if args.command == "demo":
            return cmd_demo(args.name)
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"petzlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
