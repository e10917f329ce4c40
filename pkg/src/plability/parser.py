"""Reader, writer and validator for the ``.plp`` product description format.

One file holds any number of products. Grammar (line oriented, ``#`` starts
a comment, blank lines are ignored)::

    product IDENT
    component IDENT [accepts SIG SIG ...]
    edge IDENT -> IDENT SIG [required|optional]
    start IDENT IDENT ...
    classify (required|optional) IDENT IDENT ...

    SIG  := '{' [IDENT ':' TYPE (',' IDENT ':' TYPE)*] '}'
    TYPE := NAT | INT | REAL | IDENT

Statements of a product may appear in any order; names are resolved when
the product is complete.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Optional

from .model import (
    Component,
    DependencyEdge,
    MessageSignature,
    ProductGraph,
    Status,
    TypeTag,
)


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True, order=True)
class ParseDiagnostic:
    line: int
    severity: Severity = field(compare=False)
    code: str
    message: str
    product: Optional[str] = None

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def format(self, filename: str = "<input>") -> str:
        return f"{filename}:{self.line}: {self.severity.value}: {self.code}: {self.message}"


class _SyntaxError(Exception):
    pass


_TOKEN_RE = re.compile(r"\s*(?:(->)|([{}:,])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise _SyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    return tokens


class _Cursor:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, what: str = "token") -> str:
        tok = self.peek()
        if tok is None:
            raise _SyntaxError(f"expected {what}, found end of line")
        self.pos += 1
        return tok

    def expect(self, literal: str):
        tok = self.take(repr(literal))
        if tok != literal:
            raise _SyntaxError(f"expected {literal!r}, found {tok!r}")

    def ident(self, what: str = "identifier") -> str:
        tok = self.take(what)
        if not (tok[0].isalpha() or tok[0] == "_"):
            raise _SyntaxError(f"expected {what}, found {tok!r}")
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def done(self):
        if not self.at_end():
            raise _SyntaxError(f"unexpected trailing input {self.peek()!r}")


def _signature(cur: _Cursor) -> MessageSignature:
    cur.expect("{")
    fields = {}
    if cur.peek() != "}":
        while True:
            fid = cur.ident("field id")
            cur.expect(":")
            tname = cur.ident("type")
            if fid in fields:
                raise _SyntaxError(f"duplicate field id {fid!r} in signature")
            fields[fid] = TypeTag.parse(tname)
            if cur.peek() == ",":
                cur.take()
                continue
            break
    cur.expect("}")
    return MessageSignature(frozenset(fields.items()))


@dataclass
class _Draft:
    product_id: str
    line: int
    components: dict = field(default_factory=dict)  # name -> (Component, line)
    edges: list = field(default_factory=list)  # (edge, line)
    start: list = field(default_factory=list)  # (name, line)
    declared: list = field(default_factory=list)  # (name, status, line)


def parse_products(
    text: str, strict: bool = False
) -> tuple[list[ProductGraph], list[ParseDiagnostic]]:
    """Parse every product in ``text``.

    A product with any ERROR diagnostic is left out of the returned list.
    In strict mode an edge whose signature is missing from the target's
    non-empty ``accepts`` set is an error rather than a warning.
    """
    diags: list[ParseDiagnostic] = []
    drafts: list[_Draft] = []
    broken: set[int] = set()  # id() of drafts that hit an error
    current: Optional[_Draft] = None

    def error(lineno, code, message, draft=None):
        diags.append(ParseDiagnostic(lineno, Severity.ERROR, code, message,
                                     draft.product_id if draft else None))
        if draft is not None:
            broken.add(id(draft))

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        try:
            cur = _Cursor(_tokenize(line))
            keyword = cur.take()
            if keyword == "product":
                pid = cur.ident("product id")
                cur.done()
                current = _Draft(pid, lineno)
                if any(d.product_id == pid for d in drafts):
                    error(lineno, "E_DUP_PRODUCT", f"product {pid!r} declared twice", current)
                drafts.append(current)
                continue
            if keyword not in ("component", "edge", "start", "classify"):
                raise _SyntaxError(f"unknown statement {keyword!r}")
            if current is None:
                error(lineno, "E_NO_PRODUCT", f"{keyword!r} statement before any 'product'")
                continue
            if keyword == "component":
                name = cur.ident("component name")
                accepts = set()
                if not cur.at_end():
                    cur.expect("accepts")
                    accepts.add(_signature(cur))
                    while not cur.at_end():
                        accepts.add(_signature(cur))
                cur.done()
                if name in current.components:
                    error(lineno, "E_DUP_COMPONENT",
                          f"component {name!r} declared twice", current)
                    continue
                current.components[name] = (Component(name, frozenset(accepts)), lineno)
            elif keyword == "edge":
                source = cur.ident("source component")
                cur.expect("->")
                target = cur.ident("target component")
                sig = _signature(cur)
                status = Status.REQUIRED
                if not cur.at_end():
                    mod = cur.take()
                    if mod not in ("required", "optional"):
                        raise _SyntaxError(f"expected 'required' or 'optional', found {mod!r}")
                    status = Status(mod)
                cur.done()
                current.edges.append((DependencyEdge(source, target, sig, status), lineno))
            elif keyword == "start":
                names = [cur.ident("component name")]
                while not cur.at_end():
                    names.append(cur.ident("component name"))
                current.start.extend((n, lineno) for n in names)
            else:
                mod = cur.take("'required' or 'optional'")
                if mod not in ("required", "optional"):
                    raise _SyntaxError(f"expected 'required' or 'optional', found {mod!r}")
                names = [cur.ident("component name")]
                while not cur.at_end():
                    names.append(cur.ident("component name"))
                current.declared.extend((n, Status(mod), lineno) for n in names)
        except (_SyntaxError, ValueError) as exc:
            error(lineno, "E_SYNTAX", str(exc), current)

    products = []
    for draft in drafts:
        product = _finish(draft, strict, diags, error)
        if product is not None and id(draft) not in broken:
            products.append(product)
    return products, diags


def _finish(draft: _Draft, strict: bool, diags: list, error) -> Optional[ProductGraph]:
    names = draft.components
    ok = True
    if not names:
        error(draft.line, "E_EMPTY_PRODUCT", f"product {draft.product_id!r} has no components", draft)
        ok = False

    lines: dict = {"product": draft.line}
    edges = {}
    for edge, lineno in draft.edges:
        missing = [n for n in dict.fromkeys((edge.source, edge.target)) if n not in names]
        for n in missing:
            error(lineno, "E_UNKNOWN_COMPONENT", f"edge names undeclared component {n!r}", draft)
        if missing:
            ok = False
            continue
        if edge.source == edge.target:
            error(lineno, "E_SELF_LOOP", f"edge from {edge.source!r} to itself", draft)
            ok = False
            continue
        if edge.identity in edges:
            error(lineno, "E_DUP_EDGE",
                  f"duplicate edge {edge.source} -> {edge.target} {edge.signature}", draft)
            ok = False
            continue
        edges[edge.identity] = edge
        lines[("edge", edge.identity)] = lineno

    start = {}
    for name, lineno in draft.start:
        if name not in names:
            error(lineno, "E_UNKNOWN_COMPONENT", f"start names undeclared component {name!r}", draft)
            ok = False
        start.setdefault(name, lineno)

    declared: dict = {}
    for name, status, lineno in draft.declared:
        if name not in names:
            error(lineno, "E_UNKNOWN_COMPONENT",
                  f"classify names undeclared component {name!r}", draft)
            ok = False
        elif declared.get(name, status) is not status:
            error(lineno, "E_CLASSIFY_CONFLICT",
                  f"component {name!r} classified both required and optional", draft)
            ok = False
        else:
            declared[name] = status
            lines[("classify", name)] = lineno

    if not ok:
        return None
    for name, (_, lineno) in names.items():
        lines[("component", name)] = lineno
    product = ProductGraph(
        draft.product_id,
        frozenset(c for c, _ in names.values()),
        frozenset(edges.values()),
        frozenset(start),
        declared,
        lines,
    )
    accept_diags = undeclared_accepts(product, strict)
    diags.extend(accept_diags)
    if any(d.is_error for d in accept_diags):
        return None
    return product


def undeclared_accepts(product: ProductGraph, strict: bool = False) -> list[ParseDiagnostic]:
    """Edges whose signature the target does not list among its declared accepts."""
    out = []
    severity, code = (Severity.ERROR, "E_UNDECLARED_ACCEPT") if strict else (
        Severity.WARNING, "W_UNDECLARED_ACCEPT")
    for edge in sorted(product.edges, key=DependencyEdge.sort_key):
        accepts = product.component(edge.target).accepts
        if accepts and edge.signature not in accepts:
            out.append(ParseDiagnostic(
                product.line_of(("edge", edge.identity)), severity, code,
                f"{edge.target} does not declare accepting {edge.signature} (from {edge.source})",
                product.product_id))
    return out


def validate(product: ProductGraph, strict: bool = False) -> list[ParseDiagnostic]:
    """Semantic checks on a parsed product; diagnostics are returned, never raised."""
    from .classify import classification_mismatches, find_isolated

    pid = product.product_id
    diags = []
    for name in sorted(find_isolated(product)):
        diags.append(ParseDiagnostic(
            product.line_of(("component", name)), Severity.WARNING, "W_ISOLATED",
            f"component {name} has no dependencies; review its relevance manually", pid))
    diags.extend(undeclared_accepts(product, strict))

    names = product.component_names
    if not product.start_set and set(product.declared) != names:
        if product.declared:
            msg = "no start set and the declared classification does not cover every component"
        else:
            msg = "neither a start set nor a declared classification is given"
        diags.append(ParseDiagnostic(product.line_of("product"), Severity.ERROR,
                                     "E_NO_CLASSIFICATION_BASIS", msg, pid))
    else:
        severity, code = (Severity.ERROR, "E_CLASSIFICATION_MISMATCH") if strict else (
            Severity.WARNING, "W_CLASSIFICATION_MISMATCH")
        for name, declared, derived in classification_mismatches(product):
            diags.append(ParseDiagnostic(
                product.line_of(("classify", name)), severity, code,
                f"{name} is declared {declared.value} but derived {derived.value}", pid))
    return sorted(diags)


def serialize_products(products: list[ProductGraph]) -> str:
    """Canonical text for ``products``; ``parse_products`` of the result gives them back."""
    blocks = []
    for product in products:
        out = [f"product {product.product_id}"]
        for name in sorted(product.component_names):
            comp = product.component(name)
            line = f"component {name}"
            if comp.accepts:
                line += " accepts " + " ".join(
                    str(s) for s in sorted(comp.accepts, key=MessageSignature.sort_key))
            out.append(line)
        for edge in sorted(product.edges, key=DependencyEdge.sort_key):
            out.append(f"edge {edge.source} -> {edge.target} "
                       f"{edge.signature} {edge.status.value}")
        if product.start_set:
            out.append("start " + " ".join(sorted(product.start_set)))
        for status in Status:
            names = sorted(n for n, s in product.declared.items() if s is status)
            if names:
                out.append(f"classify {status.value} " + " ".join(names))
        blocks.append("\n".join(out) + "\n")
    return "\n".join(blocks)
