"""Command-line entry point: batch diagnosis, self-tests, KB maintenance, serving.

Exit codes: 0 ok, 1 domain error (parse/validation/unknown index),
2 no signal, 3 environment (I/O, bind failure).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import engine, kb as kbm, render, selftest
from .engine import NoSignalError
from .kb import KBError, KBValidationError
from .sessions import KBManager, write_text_atomic

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_NO_SIGNAL = 2
EXIT_ENV = 3

ENV_KB = "SNN_KB"
ENV_LISTEN = "SNN_LISTEN"
ENV_REPORTS = "SNN_REPORTS"
ENV_UI = "SNN_UI"

DEFAULT_LISTEN = "127.0.0.1:8000"
DEFAULT_REPORTS = "./reports"


@dataclass
class ServeConfig:
    kb_path: str | None  # None = packaged default
    listen: str
    reports_dir: str
    ui_dir: str | None


def resolve_kb_path(flag_value: str | None) -> str | None:
    """Flag wins over SNN_KB; None means the packaged default data."""
    return flag_value or os.environ.get(ENV_KB) or None


def load_kb(path: str | None):
    if path is None:
        return kbm.default_kb()
    return kbm.load_kb_file(path)


def build_parser() -> argparse.ArgumentParser:
    kb_opt = argparse.ArgumentParser(add_help=False)
    kb_opt.add_argument("--kb", metavar="PATH", default=None,
                        help=f"knowledge base file (env {ENV_KB}; "
                             "defaults to the packaged data)")

    parser = argparse.ArgumentParser(
        prog="diagnet",
        description="Knowledge-base-driven diagnostic scoring engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diagnose", parents=[kb_opt],
                       help="score a response file and print the result table")
    p.add_argument("responses", metavar="RESPONSES", help="response file path")
    p.add_argument("--out", metavar="PATH", default=None,
                   help="write the chart-data bundle as JSON")

    p = sub.add_parser("selftest", parents=[kb_opt],
                       help="run formal-symptom self-tests")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--all", action="store_true",
                       help="profile every disease")
    group.add_argument("--disease", type=int, metavar="D",
                       help="self-test a single disease index")

    p = sub.add_parser("kb", parents=[kb_opt], help="knowledge base maintenance")
    kb_sub = p.add_subparsers(dest="kb_command", required=True)
    kb_sub.add_parser("validate", help="report all violations")
    pw = kb_sub.add_parser("set-weight", help="upsert a weight (0 deletes) and "
                                              "rewrite the KB file atomically")
    pw.add_argument("d", type=int)
    pw.add_argument("s", type=int)
    pw.add_argument("i", type=int)
    pw.add_argument("w", type=str)
    pe = kb_sub.add_parser("export", help="print the canonical KB document")
    pe.add_argument("--out", metavar="PATH", default=None)

    p = sub.add_parser("serve", parents=[kb_opt], help="run the HTTP service")
    p.add_argument("--listen", metavar="ADDR", default=None,
                   help=f"host:port (env {ENV_LISTEN}, default {DEFAULT_LISTEN})")
    p.add_argument("--reports", metavar="DIR", default=None,
                   help=f"report directory (env {ENV_REPORTS}, "
                        f"default {DEFAULT_REPORTS})")

    return parser


def cmd_diagnose(args) -> int:
    try:
        kb = load_kb(resolve_kb_path(args.kb))
    except OSError as exc:
        print(f"cannot read knowledge base: {exc}", file=sys.stderr)
        return EXIT_ENV
    except KBError as exc:
        print(f"knowledge base error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        responses = engine.load_response_file(args.responses)
    except OSError as exc:
        print(f"cannot read responses: {exc}", file=sys.stderr)
        return EXIT_ENV
    except engine.ResponseParseError as exc:
        print(f"response file error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        result = engine.diagnose(kb, responses)
    except NoSignalError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NO_SIGNAL
    except engine.CatalogMismatchError as exc:
        print(f"response error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(render.result_block(result))
    if args.out:
        bundle = engine.chart_data(result).to_payload()
        try:
            write_text_atomic(args.out, json.dumps(bundle, indent=2))
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_ENV
        print(f"chart data written to {args.out}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    try:
        kb = load_kb(resolve_kb_path(args.kb))
    except OSError as exc:
        print(f"cannot read knowledge base: {exc}", file=sys.stderr)
        return EXIT_ENV
    except KBError as exc:
        print(f"knowledge base error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.all:
        profile = selftest.optimal_likelihood_profile(kb)
        print(render.profile_block(profile, kb.diseases))
        return EXIT_OK
    try:
        result = selftest.self_test(kb, args.disease)
    except kbm.UnknownDiseaseError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DOMAIN
    print(render.result_block(result))
    return EXIT_OK


def cmd_kb(args) -> int:
    kb_path = resolve_kb_path(args.kb)
    if args.kb_command == "set-weight" and kb_path is None:
        print("set-weight requires --kb PATH (refusing to edit the packaged "
              "default data)", file=sys.stderr)
        return EXIT_ENV

    if args.kb_command == "validate":
        try:
            kb = load_kb(kb_path)
        except OSError as exc:
            print(f"cannot read knowledge base: {exc}", file=sys.stderr)
            return EXIT_ENV
        except KBValidationError as exc:
            for v in exc.violations:
                print(v.message)
            print(f"{len(exc.violations)} violations")
            return EXIT_DOMAIN
        except KBError as exc:
            print(f"knowledge base error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        violations = kbm.validate(kb)
        for v in violations:
            print(v.message)
        print(f"{len(violations)} violations")
        return EXIT_DOMAIN if violations else EXIT_OK

    try:
        kb = load_kb(kb_path)
    except OSError as exc:
        print(f"cannot read knowledge base: {exc}", file=sys.stderr)
        return EXIT_ENV
    except KBError as exc:
        print(f"knowledge base error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    if args.kb_command == "set-weight":
        try:
            w = Fraction(args.w)
        except (ValueError, ZeroDivisionError):
            print(f"bad weight value {args.w!r}", file=sys.stderr)
            return EXIT_DOMAIN
        try:
            edited = kbm.set_weight(kb, args.d, args.s, args.i, w)
        except KBError as exc:
            print(f"edit rejected: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        try:
            write_text_atomic(kb_path, kbm.export_knowledge_base(edited))
        except OSError as exc:
            print(f"cannot write {kb_path}: {exc}", file=sys.stderr)
            return EXIT_ENV
        total = kbm.total_positive_weight(edited, args.d)
        print(f"weight ({args.d},{args.s},{args.i}) set to {w}; "
              f"total positive weight for disease {args.d} is now {total}")
        return EXIT_OK

    # export
    try:
        text = kbm.export_knowledge_base(kb)
    except KBValidationError as exc:
        print(f"export refused: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.out:
        try:
            write_text_atomic(args.out, text)
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_ENV
        print(f"knowledge base written to {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def parse_listen(value: str) -> tuple[str, int]:
    host, sep, port = value.rpartition(":")
    if not sep:
        raise ValueError(f"listen address {value!r} is not host:port")
    return host, int(port)


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    kb_path = resolve_kb_path(args.kb)
    listen = args.listen or os.environ.get(ENV_LISTEN) or DEFAULT_LISTEN
    reports_dir = args.reports or os.environ.get(ENV_REPORTS) or DEFAULT_REPORTS
    ui_dir = os.environ.get(ENV_UI) or None
    try:
        host, port = parse_listen(listen)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ENV
    try:
        kb = load_kb(kb_path)
    except OSError as exc:
        print(f"cannot read knowledge base: {exc}", file=sys.stderr)
        return EXIT_ENV
    except KBError as exc:
        print(f"knowledge base error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    manager = KBManager(kb, path=kb_path)
    app = create_app(manager, reports_dir, ui_dir=ui_dir)
    config = uvicorn.Config(app, host=host, port=port, log_level="info")
    server = uvicorn.Server(config)
    try:
        server.run()
    except KeyboardInterrupt:
        # uvicorn re-raises the interrupt after its graceful shutdown completed
        pass
    except (OSError, SystemExit) as exc:
        print(f"server failed: {exc}", file=sys.stderr)
        return EXIT_ENV
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "diagnose":
        return cmd_diagnose(args)
    if args.command == "selftest":
        return cmd_selftest(args)
    if args.command == "kb":
        return cmd_kb(args)
    return cmd_serve(args)


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
