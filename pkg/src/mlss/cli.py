"""Command-line driver.

    mlss solve FILE [--untyped] [--model] [--cert PATH] [--json] [--budget N] [--debug-invariants]
    mlss check FILE --cert PATH
    mlss infer FILE

Exit codes: 10 SAT, 20 UNSAT, 30 ill-typed, 0 success of ``check``/``infer``,
1 usage, I/O, parse or budget error, 2 certificate rejected, 70 internal
invariant failure.  Errors go to stderr as ``error:<category>: message``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .certificate import Certificate, CertificateFormatError, check_certificate
from .hf import render
from .levels import Untypeable, infer
from .parser import ParseError, SourceFormula, parse_source
from .solver import DEFAULT_STEP_BUDGET, BudgetExceeded, InternalError, Sat, decide
from .syntax import vars_of

EXIT_SAT, EXIT_UNSAT, EXIT_ILL_TYPED = 10, 20, 30
EXIT_OK, EXIT_USAGE, EXIT_REJECT, EXIT_INTERNAL = 0, 1, 2, 70


class _Exit(Exception):
    def __init__(self, code: int, category: str, message: str):
        super().__init__(message)
        self.code, self.category, self.message = code, category, message


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise _Exit(EXIT_USAGE, "usage", message)


@dataclass
class RunConfig:
    input: str
    mode: str = "typed"
    emit_model: bool = False
    certificate_out: str | None = None
    check_certificate_in: str | None = None
    output: str = "text"
    step_budget: int | None = None
    debug_invariants: bool = False


def _parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="mlss", description="Satisfiability of MLSS formulas over hereditarily finite sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)
    s = sub.add_parser("solve", help="decide a formula")
    s.add_argument("file")
    s.add_argument("--untyped", action="store_true", help="treat every term as a set")
    s.add_argument("--model", action="store_true", help="print a model when SAT")
    s.add_argument("--cert", metavar="PATH", help="write an UNSAT certificate")
    s.add_argument("--json", action="store_true", help="machine-readable report")
    s.add_argument("--budget", type=int, metavar="N", help="maximum number of rule applications")
    s.add_argument("--debug-invariants", action="store_true", help="re-check invariants after each step")
    c = sub.add_parser("check", help="check an UNSAT certificate")
    c.add_argument("file")
    c.add_argument("--cert", metavar="PATH", required=True)
    i = sub.add_parser("infer", help="print levels and urelements")
    i.add_argument("file")
    return p


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _Exit(EXIT_USAGE, "io", f"{path}: {e.strerror or e}") from None


def _load(path: str) -> SourceFormula:
    try:
        return parse_source(_read(path), path)
    except ParseError as e:
        raise _Exit(EXIT_USAGE, "parse", str(e)) from None


def _ill_typed(src: SourceFormula, e: Untypeable) -> _Exit:
    where = ", ".join(
        f"{src.origin}:{src.atom_spans[i]} '{src.text[src.atom_spans[i].start:src.atom_spans[i].end]}'"
        for i in e.atoms if i < len(src.atom_spans)
    )
    msg = f"{e}" + (f"; involved atoms: {where}" if where else "")
    return _Exit(EXIT_ILL_TYPED, "ill-typed", msg)


def render_report(verdict, config: RunConfig, input_vars) -> str:
    sat = isinstance(verdict, Sat)
    if config.output == "json":
        doc: dict = {"status": "sat" if sat else "unsat"}
        if sat and config.emit_model:
            doc["model"] = {x: render(verdict.model[x]) for x in sorted(input_vars)}
        if not sat and config.certificate_out:
            doc["certificate_path"] = config.certificate_out
        doc["stats"] = verdict.stats.as_dict()
        return json.dumps(doc)
    lines = ["SAT" if sat else "UNSAT"]
    if sat and config.emit_model:
        lines += [f"{x} = {render(verdict.model[x])}" for x in sorted(input_vars)]
    if not sat and config.certificate_out:
        lines.append(f"certificate: {config.certificate_out}")
    return "\n".join(lines)


def _solve(cfg: RunConfig) -> int:
    src = _load(cfg.input)
    f = src.formula
    budget = DEFAULT_STEP_BUDGET if cfg.step_budget is None else cfg.step_budget
    try:
        verdict = decide(f, cfg.mode, budget=budget, debug_invariants=cfg.debug_invariants)
    except Untypeable as e:
        raise _ill_typed(src, e) from None
    except BudgetExceeded as e:
        raise _Exit(EXIT_USAGE, "budget", str(e)) from None
    if not isinstance(verdict, Sat) and cfg.certificate_out:
        try:
            with open(cfg.certificate_out, "w", encoding="utf-8") as fh:
                fh.write(verdict.certificate.dumps())
                fh.write("\n")
        except OSError as e:
            raise _Exit(EXIT_USAGE, "io", f"{cfg.certificate_out}: {e.strerror or e}") from None
    print(render_report(verdict, cfg, vars_of(f)))
    return EXIT_SAT if isinstance(verdict, Sat) else EXIT_UNSAT


def _check(path: str, cert_path: str) -> int:
    f = _load(path).formula
    try:
        cert = Certificate.loads(_read(cert_path))
    except CertificateFormatError as e:
        raise _Exit(EXIT_USAGE, "certificate", str(e)) from None
    res = check_certificate(f, cert)
    if res.ok:
        print("certificate OK")
        return EXIT_OK
    where = "/".join(map(str, res.path)) or "root"
    print(f"certificate rejected at {where}: {res.reason}")
    print(f"error:reject: {res.reason} (at {where})", file=sys.stderr)
    return EXIT_REJECT


def _infer(path: str) -> int:
    src = _load(path)
    try:
        ty = infer(src.formula)
    except Untypeable as e:
        raise _ill_typed(src, e) from None
    for x in sorted(ty.env.vars):
        print(f"{x} : {ty.env.vars[x]}")
    for k in sorted(ty.env.empties):
        print(f"{{}}#{k} : {{}}@{ty.env.empties[k]}")
    urs = sorted(t.name for t in ty.urelems)
    print("urelements: " + (", ".join(urs) if urs else "(none)"))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
        if args.command == "solve":
            if args.budget is not None and args.budget < 0:
                raise _Exit(EXIT_USAGE, "usage", "--budget must be a natural number")
            cfg = RunConfig(
                input=args.file,
                mode="untyped" if args.untyped else "typed",
                emit_model=args.model,
                certificate_out=args.cert,
                output="json" if args.json else "text",
                step_budget=args.budget,
                debug_invariants=args.debug_invariants,
            )
            return _solve(cfg)
        if args.command == "check":
            return _check(args.file, args.cert)
        return _infer(args.file)
    except _Exit as e:
        print(f"error:{e.category}: {e.message}", file=sys.stderr)
        return e.code
    except InternalError as e:
        print(f"error:internal: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
