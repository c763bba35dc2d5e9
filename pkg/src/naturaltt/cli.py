"""Command-line front door: ``check``, ``normalize``, ``props`` and ``model``.

Exit codes: 0 on success, 1 when a check fails, 2 on I/O or usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import TextIO

from naturaltt.diagnostics import Diagnostic, TypeCheckError
from naturaltt.driver import FileReport, check_file, find_definition, model_report
from naturaltt.finmodel import DEFAULT_LIMIT
from naturaltt.kernel import DEFAULT_FUEL
from naturaltt.props import run_suite
from naturaltt.surface.pretty import pretty

OK, FAILED, USAGE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    paths: list[str] = field(default_factory=list)
    name: str | None = None
    type_in_type: bool = True
    fuel: int = DEFAULT_FUEL
    seed: int = 0
    count: int = 500
    lemma_count: int = 10_000
    limit: int = DEFAULT_LIMIT
    format: str = "text"
    annotations: bool = False


def _on_off(text: str) -> bool:
    match text.lower():
        case "on" | "true" | "yes" | "1":
            return True
        case "off" | "false" | "no" | "0":
            return False
    raise argparse.ArgumentTypeError(f"expected on or off, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type-in-type", action=argparse.BooleanOptionalAction, default=True,
                        help="accept Type : Type (default on; also --type-in-type=off)")
    common.add_argument("--fuel", type=int, default=DEFAULT_FUEL,
                        help="reduction step budget per declaration")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="naturaltt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="subcommand", required=True)

    c = sub.add_parser("check", parents=[common], help="type-check source files")
    c.add_argument("paths", nargs="+")

    n = sub.add_parser("normalize", parents=[common], help="print the normal form of a definition")
    n.add_argument("path")
    n.add_argument("name")
    n.add_argument("--annotations", action="store_true",
                   help="print the kernel's type annotations")

    pr = sub.add_parser("props", parents=[common], help="run the generative property suite")
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--count", type=int, default=500,
                    help="judgements per admissible rule")
    pr.add_argument("--lemma-count", type=int, default=10_000,
                    help="instances per syntactic lemma")

    m = sub.add_parser("model", parents=[common], help="evaluate equations in the finite model")
    m.add_argument("paths", nargs="+")
    m.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                   help="largest enumeration the model attempts")
    return p


def _expand_switches(argv: list[str]) -> list[str]:
    """Rewrite ``--type-in-type=on|off`` into the plain boolean switches."""
    out = []
    for a in argv:
        if a.startswith("--type-in-type="):
            try:
                on = _on_off(a.split("=", 1)[1])
            except argparse.ArgumentTypeError as e:
                build_parser().error(str(e))
            a = "--type-in-type" if on else "--no-type-in-type"
        out.append(a)
    return out


def config_from_args(argv: list[str]) -> RunConfig:
    ns = build_parser().parse_args(_expand_switches(argv))
    paths = getattr(ns, "paths", None) or ([ns.path] if hasattr(ns, "path") else [])
    cfg = RunConfig(ns.subcommand, paths, type_in_type=ns.type_in_type, fuel=ns.fuel,
                    format=ns.format)
    for attr in ("name", "seed", "count", "lemma_count", "limit", "annotations"):
        if hasattr(ns, attr):
            setattr(cfg, attr, getattr(ns, attr))
    return cfg


# ---------------------------------------------------------------------------
# output


class Output:
    """Collects diagnostics and renders them in the configured format."""

    def __init__(self, cfg: RunConfig, out: TextIO, err: TextIO):
        self.cfg = cfg
        self.out = out
        self.err = err
        self.records: list[dict] = []

    def diagnostic(self, d: Diagnostic) -> None:
        if self.cfg.format == "json":
            self.records.append(d.to_json())
        else:
            print(d.to_text(), file=self.out)

    def info(self, line: str) -> None:
        if self.cfg.format == "text":
            print(line, file=self.out)

    def record(self, obj: dict) -> None:
        if self.cfg.format == "json":
            self.records.append(obj)

    def io_error(self, path: str, e: OSError) -> None:
        print(f"{path}: error: {e.strerror or e}", file=self.err)

    def finish(self) -> None:
        if self.cfg.format == "json":
            print(json.dumps(self.records, indent=2, ensure_ascii=False), file=self.out)


def _load(cfg: RunConfig, path: str, o: Output) -> FileReport | None:
    try:
        return check_file(path, type_in_type=cfg.type_in_type, fuel=cfg.fuel)
    except OSError as e:
        o.io_error(path, e)
        return None


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(cfg: RunConfig, o: Output) -> int:
    status = OK
    for path in cfg.paths:
        report = _load(cfg, path, o)
        if report is None:
            return USAGE
        for d in report.diagnostics:
            o.diagnostic(d)
        if report.ok:
            o.info(f"{path}: ok ({len(report.checked)} declarations)")
        else:
            status = FAILED
    return status


def cmd_normalize(cfg: RunConfig, o: Output) -> int:
    path = cfg.paths[0]
    report = _load(cfg, path, o)
    if report is None:
        return USAGE
    if not report.ok:
        for d in report.diagnostics:
            o.diagnostic(d)
        return FAILED
    found = find_definition(report, cfg.name)
    if found is None:
        o.diagnostic(Diagnostic("scope", f"no definition named {cfg.name}", file=path))
        return FAILED
    checker = report.checker
    try:
        nf = checker.normalize(checker.empty(), found.terms[0])
    except TypeCheckError as e:
        e.diagnostic.file = path
        o.diagnostic(e.diagnostic)
        return FAILED
    text = pretty(nf, annotations=cfg.annotations)
    o.info(text)
    o.record({"file": path, "name": cfg.name, "normal_form": text})
    return OK


def cmd_props(cfg: RunConfig, o: Output) -> int:
    results = run_suite(cfg.seed, cfg.count, cfg.lemma_count)
    for r in results:
        o.info(r.line())
        if r.example:
            o.info(f"  counterexample: {r.example}")
        o.record({"property": r.name, "cases": r.cases, "failures": r.failures,
                  "counterexample": r.example})
    return OK if all(r.ok for r in results) else FAILED


def cmd_model(cfg: RunConfig, o: Output) -> int:
    status = OK
    for path in cfg.paths:
        report = _load(cfg, path, o)
        if report is None:
            return USAGE
        if not report.ok:
            for d in report.diagnostics:
                o.diagnostic(d)
            status = FAILED
            continue
        for r in model_report(report, cfg.limit):
            kernel = "convertible" if r.converts else "not convertible"
            note = "  VIOLATION" if r.violation else ""
            o.info(f"{path}: {r.label}: model {r.verdict}, kernel {kernel}{note}")
            o.record({"file": path, "decl": r.label, "model": r.verdict,
                      "converts": r.converts, "violation": r.violation})
            if r.violation:
                status = FAILED
    return status


COMMANDS = {"check": cmd_check, "normalize": cmd_normalize, "props": cmd_props, "model": cmd_model}


def main(argv: list[str] | None = None, out: TextIO | None = None,
         err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    o = Output(cfg, out, err)
    status = COMMANDS[cfg.subcommand](cfg, o)
    o.finish()
    return status


if __name__ == "__main__":
    sys.exit(main())
