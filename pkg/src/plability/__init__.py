"""Product line-ability metrics for sets of similar software products."""

from .classify import classify_components, find_isolated
from .identity import (
    ComponentKey,
    SharingLattice,
    build_lattice,
    component_key,
    exclusive_region,
    shared_by_all,
)
from .metrics import (
    ProductSetAnalysis,
    analyze_products,
    commonality_consistency_check,
    compute_all,
    impact_of_commonality,
    impact_of_product_related_reusability,
    individualization_ratio,
    product_related_reusability,
    relationship_ratio,
    reusability_benefit,
    size_of_commonality,
)
from .model import (
    Classification,
    Component,
    DependencyEdge,
    MessageSignature,
    PlabilityError,
    ProductGraph,
    Ratio,
    Status,
    TypeKind,
    TypeTag,
)
from .parser import ParseDiagnostic, Severity, parse_products, serialize_products, validate
from .report import (
    Format,
    MetricsReport,
    Recommendation,
    RecommendationKind,
    ReportConfig,
    build_report,
    recommend,
    render,
)

__version__ = "0.1.0"
