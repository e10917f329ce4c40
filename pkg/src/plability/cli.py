"""Command line interface.

Exit codes: 0 success, 1 input error (parse/validate), 2 usage error,
3 analysis precondition failure.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from .classify import classify_components
from .model import PlabilityError
from .parser import ParseDiagnostic, parse_products, validate
from .report import Format, ReportConfig, build_report, render

EXIT_OK, EXIT_INPUT, EXIT_USAGE, EXIT_ANALYSIS = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _ratio_arg(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"threshold must lie in [0, 1]: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    defaults = ReportConfig()
    parser = _Parser(prog="plability",
                     description="Measure how well a set of similar products can form a product line.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="parse and validate product description files")
    p.add_argument("files", nargs="+")
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("classify", help="print required, optional and isolated components")
    p.add_argument("file")
    p.add_argument("--product", metavar="ID")
    p.add_argument("--start", metavar="NAME[,NAME...]",
                   help="override the start set given in the file")

    p = sub.add_parser("analyze", help="compute metrics and recommendations")
    p.add_argument("files", nargs="+")
    p.add_argument("--format", choices=[f.value for f in Format], default="text")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--tau-ir", type=_ratio_arg, default=defaults.tau_ir,
                   help="IR threshold for refactoring candidates (default: %(default)s)")
    p.add_argument("--tau-prr", type=_ratio_arg, default=defaults.tau_prr,
                   help="PrR threshold for exclusion candidates (default: %(default)s)")
    p.add_argument("--tau-iprr", type=_ratio_arg, default=defaults.tau_iprr,
                   help="IPrR threshold for exclusion candidates (default: %(default)s)")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    return parser


def _load(files: Sequence[str], strict: bool, stdin: TextIO, stderr: TextIO, check: bool = True):
    """Parse (and optionally validate) all files. Returns products or None on any error."""
    products, failed = [], False
    for path in files:
        try:
            if path == "-":
                text = stdin.read()
            else:
                with open(path, encoding="utf-8", newline="") as fh:
                    text = fh.read()
        except OSError as exc:
            print(f"{path}: error: {exc.strerror or exc}", file=stderr)
            failed = True
            continue
        parsed, diags = parse_products(text, strict=strict)
        if check:
            for product in parsed:
                diags = diags + validate(product, strict=strict)
        seen: dict[ParseDiagnostic, None] = {}
        for d in sorted(diags):
            seen.setdefault(d)
        for d in seen:
            print(d.format(path), file=stderr)
        failed = failed or any(d.is_error for d in seen)
        if not parsed and not any(d.is_error for d in seen):
            print(f"{path}: error: E_NO_PRODUCT: file declares no product", file=stderr)
            failed = True
        for product in parsed:
            if any(p.product_id == product.product_id for p in products):
                print(f"{path}:{product.line_of('product')}: error: E_DUP_PRODUCT: product "
                      f"{product.product_id!r} already declared in an earlier file", file=stderr)
                failed = True
            products.append(product)
    return None if failed else products


def _cmd_validate(args, stdin, stdout, stderr) -> int:
    products = _load(args.files, args.strict, stdin, stderr)
    if products is None:
        return EXIT_INPUT
    print(f"ok: {len(products)} product(s)", file=stdout)
    return EXIT_OK


def _cmd_classify(args, stdin, stdout, stderr) -> int:
    products = _load([args.file], False, stdin, stderr, check=False)
    if products is None:
        return EXIT_INPUT
    if args.product is not None:
        products = [p for p in products if p.product_id == args.product]
        if not products:
            print(f"error: no product {args.product!r} in {args.file}", file=stderr)
            return EXIT_INPUT
    start = None
    if args.start is not None:
        start = [s.strip() for s in args.start.split(",") if s.strip()]
    out = []
    try:
        for product in products:
            cls = classify_components(product, start)
            out += [f"product {product.product_id}",
                    "required: " + " ".join(sorted(cls.required)),
                    "optional: " + " ".join(sorted(cls.optional)),
                    "isolated: " + " ".join(sorted(cls.isolated))]
    except PlabilityError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ANALYSIS
    stdout.write("\n".join(line.rstrip() for line in out) + "\n")
    return EXIT_OK


def _cmd_analyze(args, stdin, stdout, stderr) -> int:
    products = _load(args.files, args.strict, stdin, stderr)
    if products is None:
        return EXIT_INPUT
    config = ReportConfig(args.tau_ir, args.tau_prr, args.tau_iprr, args.strict)
    try:
        report = build_report(products, config)
    except PlabilityError as exc:
        print(f"error: {exc}", file=stderr)
        if exc.code == "E_TOO_FEW_PRODUCTS":
            print("analyze needs at least 2 products to compare", file=stderr)
        return EXIT_ANALYSIS
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_OK


def run_cli(
    argv: Optional[Sequence[str]] = None,
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except _UsageError as exc:
        parser.print_usage(stderr)
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    handler = {"validate": _cmd_validate, "classify": _cmd_classify, "analyze": _cmd_analyze}
    return handler[args.command](args, stdin, stdout, stderr)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
