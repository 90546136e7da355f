"""Command line driver: ``heckecert verify <target>`` and ``heckecert recheck <path>``.

Settings come from built-in defaults, then a JSON config file, then
``HECKECERT_*`` environment variables, then flags (flags win).  Exit codes:
0 success, 1 a mathematical check failed, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional, Sequence

from . import report as report_mod
from .steps import recheck_certificate
from .sweep import TARGETS, ConfigError, SweepConfig, run_identities, run_lemmas, run_matrices, run_steps

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ENV_PREFIX = "HECKECERT_"

_LIST_KEYS = ("primes", "nu", "s", "alpha", "beta", "m", "iota")
_INT_KEYS = ("precision", "jobs", "seed", "max_u", "theta_instances")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> List[int]:
    out: List[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="heckecert", description="Exact verification of the combinatorial and Hecke "
                     "computations behind reductions of crystalline representations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run a verification suite and write a report")
    v.add_argument("target", choices=TARGETS + ("all",))
    v.add_argument("--primes", "--p", dest="primes", help="comma list or ranges, e.g. 5,7 or 5..13")
    v.add_argument("--nu", help="values of nu")
    v.add_argument("--s", help="values of s")
    v.add_argument("--alpha", help="values of alpha")
    v.add_argument("--beta", help="values of beta")
    v.add_argument("--m", help="values of m for steps 3 and 4")
    v.add_argument("--iota", help="values of iota for steps 3 and 4")
    v.add_argument("--precision", type=int, help="p-adic precision M")
    v.add_argument("--jobs", type=int, help="worker processes")
    v.add_argument("--seed", type=int, help="seed for randomized instances")
    v.add_argument("--max-u", dest="max_u", type=int, help="largest u in identity grids")
    v.add_argument("--theta-instances", dest="theta_instances", type=int,
                   help="random instances per prime for the theta criterion")
    v.add_argument("--out", help="report path (default: stdout summary only)")
    v.add_argument("--config", help="JSON config file")
    v.add_argument("--allow-degenerate", dest="allow_degenerate", action="store_true", default=None,
                   help="also run points outside the theorem's regime")
    r = sub.add_parser("recheck", help="re-verify stored certificates")
    r.add_argument("path")
    return parser


def _coerce(key: str, value):
    if key in _LIST_KEYS:
        if isinstance(value, list):
            if any(isinstance(x, bool) or not isinstance(x, int) for x in value):
                raise ConfigError(f"{key} must be a list of integers")
            return value
        return _int_list(value)
    if key in _INT_KEYS:
        if isinstance(value, bool):
            raise ConfigError(f"{key} must be an integer")
        return int(value)
    if key == "allow_degenerate":
        if isinstance(value, bool):
            return value
        return str(value).strip().lower() in ("1", "true", "yes", "on")
    raise ConfigError(f"unknown setting {key!r}")


def resolve_config(args: argparse.Namespace, environ: Optional[Dict[str, str]] = None) -> SweepConfig:
    environ = os.environ if environ is None else environ
    settings: Dict[str, object] = {}
    path = args.config or environ.get(ENV_PREFIX + "CONFIG")
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        for k, val in data.items():
            settings[k] = _coerce(k, val)
    for key in _LIST_KEYS + _INT_KEYS + ("allow_degenerate",):
        env = environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            settings[key] = _coerce(key, env)
    for key in _LIST_KEYS + _INT_KEYS + ("allow_degenerate",):
        val = getattr(args, key, None)
        if val is not None:
            settings[key] = _coerce(key, val)
    try:
        cfg = SweepConfig(**settings)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        cfg = resolve_config(args)
    except (ConfigError, ValueError) as exc:
        print(f"heckecert: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    targets = TARGETS if args.target == "all" else (args.target,)
    sections: Dict[str, List[dict]] = {}
    certificates: List[dict] = []
    runners = {"identities": run_identities, "lemmas": run_lemmas, "matrices": run_matrices}
    for t in targets:
        if t == "steps":
            sections[t], certificates = run_steps(cfg)
        else:
            sections[t] = runners[t](cfg)
    doc = report_mod.build_report(args.target, cfg.to_dict(), sections, certificates)
    out = args.out or os.environ.get(ENV_PREFIX + "OUT")
    if out:
        with open(out, "w") as fh:
            fh.write(report_mod.dumps(doc))
    for line in report_mod.summary_lines(doc):
        print(line)
    return EXIT_FAIL if doc["summary"]["fail"] else EXIT_OK


def cmd_recheck(args: argparse.Namespace) -> int:
    try:
        with open(args.path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"heckecert: cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(doc, dict) and doc.get("kind") == "report":
        certs = doc.get("certificates", [])
    elif isinstance(doc, dict) and doc.get("kind") == "step_certificate":
        certs = [doc]
    elif isinstance(doc, list):
        certs = doc
    else:
        print("heckecert: not a report or certificate set", file=sys.stderr)
        return EXIT_USAGE
    bad = 0
    for n, cert in enumerate(certs):
        ok, problems = recheck_certificate(cert) if isinstance(cert, dict) else (False, ["not an object"])
        if not ok:
            bad += 1
            print(f"certificate {n}: REJECTED: {'; '.join(problems)}")
    print(f"rechecked {len(certs)} certificates, {bad} rejected")
    return EXIT_FAIL if bad else EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_recheck(args)


if __name__ == "__main__":
    sys.exit(main())
