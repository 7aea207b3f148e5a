"""Command-line entry point.

Exit codes: 0 success or conformant, 1 non-conformant input or lint
findings, 2 usage error, 3 I/O or internal error. Requested artifacts and
reports go to stdout (or ``-o``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import ProfileError
from .gen.docs import gen_docs
from .gen.jsonschema import gen_jsonschema, jsonld_context
from .gen.shacl import IriMode, ShapeIriPolicy, gen_shacl, gen_shacl_jsonld
from .harvest import DEFAULT_PAGE_CAP, DEFAULT_TIMEOUT, harvest, load_source
from .ir import SchemaIR, load_ir
from .layers import builtin_layer_text, lint_extension, resolve_layer
from .rdf import materialize_super_properties, serialize, to_triples
from .report import ValidationReport
from .shacl_ingest import import_shacl
from .validate import load_instance, validate

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3

log = logging.getLogger("apkit")

_USAGE_CODES = {"UNKNOWN_ROOT_CLASS", "UNKNOWN_LAYER", "INVALID_POLICY"}
_FIXTURES = {"mini": "dcat-ap-mini.jsonld", "nmr": "nmr.yaml"}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _use_color(choice: str, stream) -> bool:
    if choice == "always":
        return True
    if choice == "never" or os.environ.get("NO_COLOR"):
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _write(data: bytes | str, out: str | None) -> None:
    if isinstance(data, str):
        data = data.encode("utf-8")
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    path = Path(out)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
    except OSError as exc:
        raise ProfileError("IO_ERROR", f"cannot write {path}: {exc}") from exc
    log.info("wrote %s", path)


def _print_diagnostics(report: ValidationReport, args) -> None:
    if report.findings:
        sys.stderr.write(report.to_text(_use_color(args.color, sys.stderr)))


def _load_context_overrides(pairs: list[str]) -> dict:
    overrides = {}
    for pair in pairs or []:
        url, sep, path = pair.partition("=")
        if not sep:
            raise _UsageError(f"--context-override expects URL=FILE, got {pair!r}")
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ProfileError("IO_ERROR", f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ProfileError("MALFORMED_JSON", f"{path}: {exc}") from exc
        overrides[url] = data
    return overrides


# subcommands


def cmd_import_shacl(args) -> int:
    report = ValidationReport()
    ir = import_shacl(
        args.input, profile_id=args.id, report=report, context_overrides=_load_context_overrides(args.context_override)
    )
    _print_diagnostics(report, args)
    _write(ir.canonical_json(), args.output)
    return EXIT_OK


def _apply_layers(base: SchemaIR, specs: list[str], args) -> tuple[SchemaIR, bool]:
    ir = base
    for spec in specs:
        layer = resolve_layer(spec, ir)
        report = lint_extension(ir, layer)
        _print_diagnostics(report, args)
        if report.findings:
            log.error("layer %s has lint findings; not applied", layer.id)
            return ir, False
        ir = layer.apply(ir)
        log.info("applied layer %s on %s", layer.id, ir.layer_of)
    return ir, True


def cmd_extend(args) -> int:
    ir, ok = _apply_layers(load_ir(args.base), args.layer, args)
    if not ok:
        return EXIT_FINDINGS
    _write(ir.canonical_json(), args.output)
    return EXIT_OK


def cmd_lint(args) -> int:
    base = load_ir(args.base)
    layer = resolve_layer(args.layer, base)
    report = lint_extension(base, layer)
    if args.format == "json":
        _write(report.to_json(), None)
    else:
        _write(report.to_text(_use_color(args.color, sys.stdout)), None)
    return EXIT_OK if not report.findings else EXIT_FINDINGS


def cmd_validate(args) -> int:
    ir = load_ir(args.profile)
    doc = load_instance(args.instance, args.cls)
    report = validate(doc, ir)
    if args.format == "json":
        _write(report.to_json(), None)
    else:
        _write(report.to_text(_use_color(args.color, sys.stdout)), None)
    return EXIT_OK if report.conformant else EXIT_FINDINGS


def cmd_convert(args) -> int:
    ir = load_ir(args.profile)
    doc = load_instance(args.instance, args.cls)
    report = validate(doc, ir)
    if not report.conformant:
        _print_diagnostics(report, args)
        log.error("%s does not conform to %s; nothing emitted", args.instance, ir.id)
        return EXIT_FINDINGS
    ts = to_triples(doc, ir, check=False)
    if args.materialize_super:
        ts = materialize_super_properties(ts, ir)
    _write(serialize(ts, args.format, ir.prefix_map), args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    ir = load_ir(args.profile)
    out_dir = Path(args.out_dir) if args.out_dir else None
    if args.kind == "shacl":
        policy = ShapeIriPolicy(base=args.shape_base, mode=IriMode(args.shape_mode))
        if args.jsonld:
            data, name = gen_shacl_jsonld(ir, policy), f"{ir.id}.shapes.jsonld"
        else:
            data, name = gen_shacl(ir, policy), f"{ir.id}.shapes.ttl"
        _write(data, str(out_dir / name) if out_dir else args.output)
    elif args.kind == "jsonschema":
        if not args.cls:
            raise _UsageError("gen jsonschema requires --class")
        data = gen_jsonschema(ir, args.cls)
        _write(data, str(out_dir / f"{ir.id}.{args.cls}.schema.json") if out_dir else args.output)
        if out_dir:
            ctx = json.dumps(jsonld_context(ir), indent=2, ensure_ascii=False) + "\n"
            _write(ctx, str(out_dir / f"{ir.id}.context.jsonld"))
    else:
        if not out_dir:
            raise _UsageError("gen docs requires --out-dir")
        for name, text in gen_docs(ir).items():
            _write(text, str(out_dir / name))
    return EXIT_OK


def cmd_harvest(args) -> int:
    source = load_source(args.source)
    run = harvest(source, args.out, page_cap=args.page_cap, timeout=args.timeout)
    _write(json.dumps(run.to_dict(), indent=2) + "\n", None)
    return EXIT_OK if run.conformant == run.fetched else EXIT_FINDINGS


def cmd_export(args) -> int:
    if args.what in ("plus", "chem"):
        _write(builtin_layer_text(args.what), args.output)
    else:
        text = resources.files("apkit.resources").joinpath(_FIXTURES[args.what]).read_bytes()
        _write(text, args.output)
    return EXIT_OK


# parser


def build_parser() -> argparse.ArgumentParser:
    def globals_(default):
        g = _Parser(add_help=False)
        g.add_argument("--log-level", default=default or "WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
        g.add_argument("--color", default=default or "auto", choices=["auto", "always", "never"])
        return g

    # Subcommands accept the global flags too, without clobbering values
    # given before the subcommand name.
    common = globals_(argparse.SUPPRESS)
    p = _Parser(prog="apkit", description="Compile, extend and apply SHACL application profiles.",
                parents=[globals_(None)])
    p.add_argument("--version", action="version", version=f"apkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("import-shacl", parents=[common], help="compile JSON-LD shapes into a profile")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--id", help="profile id (default: file name stem)")
    s.add_argument("--context-override", action="append", metavar="URL=FILE",
                   help="local file standing in for a remote @context")
    s.set_defaults(func=cmd_import_shacl)

    s = sub.add_parser("extend", parents=[common], help="apply extension layers left to right")
    s.add_argument("base")
    s.add_argument("--layer", action="append", required=True, help="plus, chem or a .layer.json file")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("lint", parents=[common], help="check a layer against its base profile")
    s.add_argument("base")
    s.add_argument("--layer", required=True)
    s.add_argument("--format", default="text", choices=["text", "json"])
    s.set_defaults(func=cmd_lint)

    s = sub.add_parser("validate", parents=[common], help="validate an instance document")
    s.add_argument("instance")
    s.add_argument("--profile", required=True)
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--format", default="text", choices=["text", "json"])
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("convert", parents=[common], help="emit RDF for a conformant instance")
    s.add_argument("instance")
    s.add_argument("--profile", required=True)
    s.add_argument("--class", dest="cls", required=True)
    s.add_argument("--format", default="nt", choices=["nt", "ttl"])
    s.add_argument("--materialize-super", action="store_true", help="also emit super-slot predicates")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("gen", parents=[common], help="generate SHACL, JSON Schema or docs")
    s.add_argument("kind", choices=["shacl", "jsonschema", "docs"])
    s.add_argument("--profile", required=True)
    s.add_argument("--class", dest="cls", help="root class (jsonschema)")
    s.add_argument("--shape-base", default=ShapeIriPolicy.base)
    s.add_argument("--shape-mode", default="FRAGMENT", choices=[m.value for m in IriMode])
    s.add_argument("--jsonld", action="store_true", help="write shapes as JSON-LD instead of Turtle")
    s.add_argument("--out-dir")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("harvest", parents=[common], help="harvest and validate remote records")
    s.add_argument("--source", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--page-cap", type=int, default=DEFAULT_PAGE_CAP)
    s.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT)
    s.set_defaults(func=cmd_harvest)

    s = sub.add_parser("export", parents=[common], help="write a bundled layer or fixture")
    s.add_argument("what", choices=["plus", "chem", *_FIXTURES])
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"apkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProfileError as exc:
        if exc.report is not None:
            _print_diagnostics(exc.report, args)
        print(f"apkit: {exc}", file=sys.stderr)
        if exc.code == "NOT_CONFORMANT":
            return EXIT_FINDINGS
        return EXIT_USAGE if exc.code in _USAGE_CODES else EXIT_ERROR
    except Exception as exc:  # noqa: BLE001
        log.debug("internal error", exc_info=True)
        print(f"apkit: internal error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
