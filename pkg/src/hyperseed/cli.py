"""Command-line front end.

    hyperseed list
    hyperseed verify ID [--param name=p/q ...] [--digits N] [--format json]
    hyperseed verify-all [--digits N]
    hyperseed eval --spec JSON | --input FILE [--param ...]
    hyperseed transform --a p/q --input FILE [--output FILE] [--inverse]
    hyperseed derive --family KIND [--param b=p/q] [--param a=p/q --param n=N]

Exit status is 0 when every check passes, 1 when any check fails and 2 on
usage or domain errors (with a diagnostic on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import catalog
from .errors import HyperseedError
from .mishev import (
    FAMILY_KINDS,
    SequenceFamily,
    TransformParams,
    derive_identity,
    format_sequence,
    forward_L,
    inverse_reconstruct,
    read_sequence,
)
from .rational import format_rational, parse_rational
from .series import spec_from_json, sum_series

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    """Usage problem detected after argument parsing."""


@dataclass
class CliConfig:
    command: str
    digits: int = catalog.DEFAULT_DIGITS
    format: str = "text"
    params: dict[str, str] = field(default_factory=dict)
    identity: str | None = None
    input: str | None = None
    output: str | None = None
    spec: str | None = None
    a: str | None = None
    inverse: bool = False
    family: str | None = None
    confirm: bool = False
    max_terms: int = 10**6


def _param_pair(text: str) -> tuple[str, str]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected name=p/q, got {text!r}")
    try:
        parse_rational(value.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return name.strip(), value.strip()


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=_positive_int, default=catalog.DEFAULT_DIGITS,
                        help="decimal digits to verify (default %(default)s)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--param", action="append", type=_param_pair, default=[], metavar="NAME=P/Q",
                        help="parameter value, repeatable")
    common.add_argument("--max-terms", type=_positive_int, default=10**6,
                        help="term budget for direct summation")

    parser = argparse.ArgumentParser(prog="hyperseed", description="Verify hypergeometric series identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", parents=[common], help="list catalog identities")

    p = sub.add_parser("verify", parents=[common], help="verify one identity")
    p.add_argument("identity")

    sub.add_parser("verify-all", parents=[common], help="verify every identity at its default sweep")

    p = sub.add_parser("eval", parents=[common], help="sum a series given as JSON")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="series spec as a JSON string")
    src.add_argument("--input", help="file holding the JSON spec")

    p = sub.add_parser("transform", parents=[common], help="apply the sequence transform to a file")
    p.add_argument("--a", required=True, help="transform parameter p/q")
    p.add_argument("--input", required=True, help="one rational per line")
    p.add_argument("--output", help="write here instead of stdout")
    p.add_argument("--inverse", action="store_true", help="reconstruct x from y")

    p = sub.add_parser("derive", parents=[common], help="build the 4F3(-1) identity for a sequence family")
    p.add_argument("--family", required=True, choices=FAMILY_KINDS)
    p.add_argument("--confirm", action="store_true", help="confirm inner sums and inversion exactly first")
    return parser


def parse_config(argv: list[str] | None = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    params: dict[str, str] = {}
    for name, value in ns.param:
        if name in params:
            raise CliError(f"parameter {name!r} given twice")
        params[name] = value
    cfg = CliConfig(command=ns.command, digits=ns.digits, format=ns.format, params=params,
                    max_terms=ns.max_terms)
    for attr in ("identity", "input", "output", "spec", "a", "inverse", "family", "confirm"):
        if hasattr(ns, attr):
            setattr(cfg, attr, getattr(ns, attr))
    return cfg


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _report_text(r: catalog.VerificationReport) -> str:
    status = "PASS" if r.passed else "FAIL"
    params = " ".join(f"{k}={v}" for k, v in r.params.items())
    head = f"{status} {r.id}" + (f" [{params}]" if params else "")
    if r.achieved_digits is None:
        head += f"  {r.method}, {r.terms_used} terms"
    else:
        head += f"  {r.achieved_digits}/{r.requested_digits} digits, {r.method}, {r.terms_used} terms"
    lines = [head]
    if r.lhs or r.rhs:
        lines += [f"  lhs = {r.lhs}", f"  rhs = {r.rhs}"]
    return "\n".join(lines) + "\n"


def _emit_reports(cfg: CliConfig, reports, out) -> int:
    ok = all(r.passed for r in reports)
    if cfg.format == "json":
        if cfg.command == "verify-all":
            out.write(_dump({"digits": cfg.digits, "all_pass": ok, "reports": [r.to_json() for r in reports]}))
        else:
            out.write(_dump(reports[0].to_json()))
    else:
        for r in reports:
            out.write(_report_text(r))
        if cfg.command == "verify-all":
            failed = sum(not r.passed for r in reports)
            out.write(f"{len(reports) - failed}/{len(reports)} passed\n")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_list(cfg: CliConfig, out) -> int:
    rows = []
    for r in catalog.catalog_entries():
        rows.append({"id": r.id, "params": list(r.params), "mode": r.mode, "anchor": r.anchor})
    for name, (names, _, anchor) in catalog.PROCEDURES.items():
        rows.append({"id": name, "params": list(names), "mode": "procedure", "anchor": anchor})
    if cfg.format == "json":
        out.write(_dump(rows))
    else:
        for row in rows:
            ps = f"({','.join(row['params'])})" if row["params"] else ""
            out.write(f"{row['id'] + ps:<28} {row['mode']:<10} {row['anchor']}\n")
    return EXIT_OK


def _cmd_verify(cfg: CliConfig, out) -> int:
    if cfg.identity not in catalog.all_ids():
        raise CliError(f"unknown identity id {cfg.identity!r}")
    report = catalog.verify(cfg.identity, cfg.params, cfg.digits, cfg.max_terms)
    return _emit_reports(cfg, [report], out)


def _cmd_verify_all(cfg: CliConfig, out) -> int:
    if cfg.params:
        raise CliError("verify-all takes no --param")
    reports = catalog.verify_all(cfg.digits)
    return _emit_reports(cfg, reports, out)


def _cmd_eval(cfg: CliConfig, out) -> int:
    text = cfg.spec if cfg.spec is not None else Path(cfg.input).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"series spec is not valid JSON: {exc}") from None
    env = {k: parse_rational(v) for k, v in cfg.params.items()}
    spec = spec_from_json(obj, env)
    res = sum_series(spec, cfg.digits, cfg.max_terms)
    value = res.value.to_fixed(cfg.digits + 2, truncate=True)
    if cfg.format == "json":
        out.write(_dump({
            "value": value,
            "exact": None if res.exact is None else format_rational(res.exact),
            "method": res.method,
            "terms_used": res.terms_used,
            "error_bound": str(res.error_bound),
            "heuristic": res.heuristic,
            "budget_exceeded": res.budget_exceeded,
        }))
    else:
        extra = f" = {format_rational(res.exact)}" if res.exact is not None else ""
        out.write(f"{value}{extra}\n  {res.method}, {res.terms_used} terms\n")
        if res.budget_exceeded:
            out.write("  warning: term budget exhausted before the tail bound met the target\n")
    return EXIT_FAIL if res.budget_exceeded else EXIT_OK


def _cmd_transform(cfg: CliConfig, out) -> int:
    a = parse_rational(cfg.a)
    seq = read_sequence(cfg.input)
    if not seq:
        raise CliError(f"{cfg.input}: no values")
    params = TransformParams(a, len(seq) - 1)
    result = inverse_reconstruct(params, seq) if cfg.inverse else forward_L(params, seq)
    text = format_sequence(result)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def _cmd_derive(cfg: CliConfig, out) -> int:
    params = dict(cfg.params)
    b = params.pop("b", None)
    if b is not None and cfg.family != "pochhammer-pair":
        raise CliError("--param b only applies to the pochhammer-pair family")
    family = SequenceFamily(cfg.family, b=None if b is None else parse_rational(b))
    record = derive_identity(family, symbolic=not cfg.confirm)
    report = None
    if params:
        report = catalog.verify_record(record, params, cfg.digits, cfg.max_terms)
    if cfg.format == "json":
        body = {"identity": record.to_json()}
        if report is not None:
            body["verification"] = report.to_json()
        out.write(_dump(body))
    else:
        lhs = record.lhs
        out.write(f"{record.id}\n  4F3[{', '.join(lhs['upper'])}; {', '.join(lhs['lower'])}; -1]\n"
                  f"  = {record.rhs}\n  {record.anchor}\n")
        if report is not None:
            out.write(_report_text(report))
    if report is not None and not report.passed:
        return EXIT_FAIL
    return EXIT_OK


COMMANDS = {
    "list": _cmd_list,
    "verify": _cmd_verify,
    "verify-all": _cmd_verify_all,
    "eval": _cmd_eval,
    "transform": _cmd_transform,
    "derive": _cmd_derive,
}


def run(cfg: CliConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return COMMANDS[cfg.command](cfg, out)
    except (CliError, HyperseedError, ValueError, ArithmeticError, OSError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"hyperseed: error: {msg}\n")
        return EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_config(argv)
    except CliError as exc:
        sys.stderr.write(f"hyperseed: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 for --help
        return int(exc.code or 0)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
