"""Report assembly, recommendations and rendering (text table, JSON, Graphviz)."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .classify import classification_mismatches
from .identity import ComponentKey
from .metrics import (
    MetricGrid,
    ProductSetAnalysis,
    analyze_products,
    commonality_consistency_check,
    common_keys,
    compute_all,
)
from .model import DependencyEdge, PlabilityError, ProductGraph, Ratio, Status, format_ratio

REPORT_VERSION = 1

IPRR_NOTE = (
    "IPrR is evaluated exactly as |keys required in every product| / |keys required in the "
    "product|. The published results table for the door-ECU reference example prints 0.33 "
    "in this row; evaluating the formula on that example's sets gives 0.50 for each product, "
    "which agrees with its IoC of 0.50."
)
IDENTITY_NOTE = (
    "Components are matched by syntactic signature identity (name plus accepted messages). "
    "This is necessary but not sufficient for reuse; behavioural equivalence is not checked."
)


class RecommendationKind(enum.Enum):
    SEED_PAIR = "SEED_PAIR"
    REFACTOR_CANDIDATE = "REFACTOR_CANDIDATE"
    EXCLUSION_CANDIDATE = "EXCLUSION_CANDIDATE"
    NO_POTENTIAL = "NO_POTENTIAL"
    NOT_MEANINGFUL_PAIR = "NOT_MEANINGFUL_PAIR"


@dataclass(frozen=True)
class Recommendation:
    kind: RecommendationKind
    subjects: tuple[str, ...]
    rationale: str


@dataclass(frozen=True)
class ReportWarning:
    code: str
    subjects: tuple[str, ...]
    message: str


@dataclass(frozen=True)
class ReportConfig:
    """Recommendation thresholds. Values are compared exactly against the ratios."""

    tau_ir: Fraction = Fraction(1, 2)
    tau_prr: Fraction = Fraction(1, 4)
    tau_iprr: Fraction = Fraction(1, 4)
    strict: bool = False

    def __post_init__(self):
        for name in ("tau_ir", "tau_prr", "tau_iprr"):
            value = Fraction(getattr(self, name))
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, value)


@dataclass
class MetricsReport:
    product_ids: tuple[str, ...]
    component_counts: tuple[int, ...]
    grid: MetricGrid
    config: ReportConfig
    analysis: ProductSetAnalysis = field(repr=False)
    warnings: list[ReportWarning] = field(default_factory=list)
    recommendations: list[Recommendation] = field(default_factory=list)
    notes: list[str] = field(default_factory=lambda: [IPRR_NOTE, IDENTITY_NOTE])

    @property
    def n(self) -> int:
        return len(self.product_ids)

    def pair_label(self, pair: tuple[int, int]) -> str:
        return f"{self.product_ids[pair[0]]},{self.product_ids[pair[1]]}"

    def regions(self) -> list[tuple[tuple[str, ...], list[ComponentKey]]]:
        lattice = self.analysis.lattice
        return [
            (tuple(self.product_ids[i] for i in subset), sorted(keys, key=ComponentKey.sort_key))
            for subset, keys in lattice.regions()
        ]


def build_report(products: Sequence[ProductGraph], config: Optional[ReportConfig] = None) -> MetricsReport:
    config = config or ReportConfig()
    analysis = analyze_products(products)
    warnings = []
    for product, cls in zip(analysis.products, analysis.classifications):
        pid = product.product_id
        for name, declared, derived in classification_mismatches(product):
            message = f"{pid}: {name} is declared {declared.value} but derived {derived.value}"
            if config.strict:
                raise PlabilityError("E_CLASSIFICATION_MISMATCH", message)
            warnings.append(ReportWarning("W_CLASSIFICATION_MISMATCH", (pid,), message))
        for name in sorted(cls.isolated):
            warnings.append(ReportWarning(
                "W_ISOLATED", (pid,),
                f"{pid}: {name} has no dependencies; review its relevance manually"))
    for w in commonality_consistency_check(analysis):
        warnings.append(ReportWarning("W_STATUS_INCONSISTENT", w.required_in + w.optional_in, str(w)))

    report = MetricsReport(
        product_ids=analysis.product_ids,
        component_counts=tuple(len(k) for k in analysis.keys),
        grid=compute_all(analysis),
        config=config,
        analysis=analysis,
        warnings=warnings,
    )
    report.recommendations = recommend(report)
    return report


def recommend(report: MetricsReport) -> list[Recommendation]:
    """Derive recommendations from the metric grid and thresholds; deterministic."""
    g, cfg, ids = report.grid, report.config, report.product_ids
    out = []

    if g.soc == 0:
        out.append(Recommendation(
            RecommendationKind.NO_POTENTIAL, ids,
            "SoC = 0: no component is shared by all products, so there is no common core to reuse"))

    defined_rr = [(pair, rr) for pair, rr in g.rr.items() if rr is not None and rr > 0]
    if defined_rr:
        best = max(rr for _, rr in defined_rr)
        pair = min((tuple(sorted((ids[i], ids[j]))) for (i, j), rr in defined_rr if rr == best))
        out.append(Recommendation(
            RecommendationKind.SEED_PAIR, pair,
            f"highest RR = {best.rounded()} ({best}): the most similar pair, a natural starting "
            "point for the product line"))

    top = max((ir for ir in g.ir if ir is not None), default=None)
    top_count = sum(1 for ir in g.ir if ir is not None and ir == top)
    for pid, ir in zip(ids, g.ir):
        if ir is None:
            continue
        reasons = []
        if top_count == 1 and ir == top:
            reasons.append("the strictly highest IR")
        if ir > cfg.tau_ir:
            reasons.append(f"IR above tau_ir = {_frac(cfg.tau_ir)}")
        if reasons:
            out.append(Recommendation(
                RecommendationKind.REFACTOR_CANDIDATE, (pid,),
                f"IR = {ir.rounded()} ({ir}), {' and '.join(reasons)}: many components are "
                "individual to this product; analyse it for refactoring"))

    for pid, prr, iprr in zip(ids, g.prr, g.iprr):
        if prr is not None and iprr is not None and prr < cfg.tau_prr and iprr < cfg.tau_iprr:
            out.append(Recommendation(
                RecommendationKind.EXCLUSION_CANDIDATE, (pid,),
                f"PrR = {prr.rounded()} < {_frac(cfg.tau_prr)} and IPrR = {iprr.rounded()} < "
                f"{_frac(cfg.tau_iprr)}: the common core covers little of this product"))

    for pair, rb in g.rb.items():
        if rb is None:
            out.append(Recommendation(
                RecommendationKind.NOT_MEANINGFUL_PAIR, tuple(ids[i] for i in pair),
                f"RB undefined for {report.pair_label(pair)}: the pair shares no components "
                f"(RR = {format_ratio(g.rr[pair])})"))
    return out


def _frac(value: Fraction) -> str:
    return str(value) if value.denominator != 1 else str(value.numerator)


# -- rendering ---------------------------------------------------------------


class Format(enum.Enum):
    TEXT = "text"
    MACHINE = "json"
    DOT = "dot"


def render(report: MetricsReport, fmt: Format | str = Format.TEXT) -> str:
    fmt = Format(fmt)
    if fmt is Format.TEXT:
        return render_text(report)
    if fmt is Format.MACHINE:
        return render_json(report)
    shared = common_keys(report.analysis)
    return to_dot(report.analysis.products, {
        p.product_id: {name for name, key in _keys_by_name(report, i).items() if key in shared}
        for i, p in enumerate(report.analysis.products)
    })


def _keys_by_name(report: MetricsReport, i: int) -> dict[str, ComponentKey]:
    return {k.name: k for k in report.analysis.keys[i]}


def _table_rows(report: MetricsReport) -> tuple[list[str], list[list[str]]]:
    n, g = report.n, report.grid
    pairs = list(g.rr)
    header = ["", "all", *report.product_ids, *(report.pair_label(p) for p in pairs)]
    blank_products, blank_pairs = [""] * n, [""] * len(pairs)

    def per_product(values):
        return ["", *(format_ratio(v) for v in values), *blank_pairs]

    def per_pair(values):
        return ["", *blank_products, *(format_ratio(values[p]) for p in pairs)]

    rows = [
        ["number of components", "", *(str(c) for c in report.component_counts), *blank_pairs],
        ["SoC", str(g.soc), *blank_products, *blank_pairs],
        ["IoC", format_ratio(g.ioc), *blank_products, *blank_pairs],
        ["PrR", *per_product(g.prr)],
        ["IPrR *", *per_product(g.iprr)],
        ["RB", *per_pair(g.rb)],
        ["RR", *per_pair(g.rr)],
        ["IR", *per_product(g.ir)],
    ]
    return header, rows


def render_text(report: MetricsReport) -> str:
    header, rows = _table_rows(report)
    widths = [max(len(r[c]) for r in [header, *rows]) for c in range(len(header))]
    lines = ["RESULTS OF METRICS", ""]
    for row in [header, *rows]:
        cells = [row[0].ljust(widths[0])] + [
            cell.rjust(max(widths[c], 4)) for c, cell in enumerate(row[1:], start=1)]
        lines.append("  ".join(cells).rstrip())
    lines.append("")
    lines.append(f"* {IPRR_NOTE}")

    lines += ["", "Classification"]
    for pid, cls in zip(report.product_ids, report.analysis.classifications):
        lines.append(f"  {pid}: required {_names(cls.required)}; optional {_names(cls.optional)}; "
                     f"isolated {_names(cls.isolated)}")

    lattice = report.analysis.lattice
    lines += ["", "Sharing regions (components present in exactly these products)"]
    for subset, keys in report.regions():
        lines.append(f"  {{{','.join(subset)}}}: " + " ".join(lattice.label(k) for k in keys))

    lines += ["", "Warnings"]
    lines += [f"  - [{w.code}] {w.message}" for w in report.warnings] or ["  (none)"]
    lines += ["", "Recommendations"]
    lines += [f"  - {r.kind.value} {', '.join(r.subjects)}: {r.rationale}"
              for r in report.recommendations] or ["  (none)"]
    cfg = report.config
    lines += ["", "Notes", f"  - {IDENTITY_NOTE}",
              f"  - thresholds: tau_ir = {_frac(cfg.tau_ir)}, tau_prr = {_frac(cfg.tau_prr)}, "
              f"tau_iprr = {_frac(cfg.tau_iprr)}; strict = {str(cfg.strict).lower()}"]
    return "\n".join(lines) + "\n"


def _names(names) -> str:
    return " ".join(sorted(names)) or "-"


def _ratio_json(value: Optional[Ratio]):
    if value is None:
        return None
    return {"num": value.num, "den": value.den, "rounded": float(value.rounded())}


def _key_json(key: ComponentKey) -> dict:
    return {"name": key.name,
            "interface": [str(s) for s in sorted(key.interface, key=lambda s: s.sort_key())]}


def report_to_dict(report: MetricsReport) -> dict:
    g, ids, cfg = report.grid, report.product_ids, report.config
    return {
        "report_version": REPORT_VERSION,
        "identity": "syntactic",
        "config": {
            "tau_ir": _frac(cfg.tau_ir),
            "tau_prr": _frac(cfg.tau_prr),
            "tau_iprr": _frac(cfg.tau_iprr),
            "strict": cfg.strict,
        },
        "products": [
            {
                "id": pid,
                "components": count,
                "required": sorted(cls.required),
                "optional": sorted(cls.optional),
                "isolated": sorted(cls.isolated),
            }
            for pid, count, cls in zip(ids, report.component_counts, report.analysis.classifications)
        ],
        "metrics": {
            "SoC": g.soc,
            "IoC": _ratio_json(g.ioc),
            "PrR": {pid: _ratio_json(v) for pid, v in zip(ids, g.prr)},
            "IPrR": {pid: _ratio_json(v) for pid, v in zip(ids, g.iprr)},
            "IR": {pid: _ratio_json(v) for pid, v in zip(ids, g.ir)},
            "RB": {report.pair_label(p): _ratio_json(v) for p, v in g.rb.items()},
            "RR": {report.pair_label(p): _ratio_json(v) for p, v in g.rr.items()},
        },
        "regions": [
            {"products": list(subset), "keys": [_key_json(k) for k in keys]}
            for subset, keys in report.regions()
        ],
        "warnings": [
            {"code": w.code, "subjects": list(w.subjects), "message": w.message}
            for w in report.warnings
        ],
        "recommendations": [
            {"kind": r.kind.value, "subjects": list(r.subjects), "rationale": r.rationale}
            for r in report.recommendations
        ],
        "notes": list(report.notes),
    }


def render_json(report: MetricsReport) -> str:
    return json.dumps(report_to_dict(report), indent=2, ensure_ascii=False) + "\n"


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(products: Sequence[ProductGraph], shared: Optional[dict[str, set[str]]] = None) -> str:
    """One Graphviz digraph per product.

    Required edges are solid, optional edges dashed; edge labels carry the
    message signature. Components listed in ``shared[product_id]`` are filled.
    """
    shared = shared or {}
    blocks = []
    for product in products:
        pid = product.product_id
        marked = shared.get(pid, set())
        lines = [f"digraph {_dot_id(pid)} {{", f"  label={_dot_id(pid)};", "  node [shape=box];"]
        for name in sorted(product.component_names):
            attrs = ', style=filled, fillcolor="lightgrey"' if name in marked else ""
            lines.append(f"  {_dot_id(name)} [label={_dot_id(name)}{attrs}];")
        for edge in sorted(product.edges, key=DependencyEdge.sort_key):
            style = "solid" if edge.status is Status.REQUIRED else "dashed"
            lines.append(f"  {_dot_id(edge.source)} -> {_dot_id(edge.target)} "
                         f"[label={_dot_id(str(edge.signature))}, style={style}];")
        lines.append("}")
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks)
