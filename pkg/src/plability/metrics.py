"""Commonality and variability metrics over a set of analysed products.

All ratios are exact. A zero denominator yields ``None`` ("undefined"):
comparing products that share nothing is not meaningful, but the rest of
a report can still be computed.

Product indices are 0-based positions in the analysed product list.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .classify import classify_components
from .identity import ComponentKey, SharingLattice, product_keys
from .model import Classification, PlabilityError, ProductGraph, Ratio, ratio


@dataclass(frozen=True)
class ProductSetAnalysis:
    products: tuple[ProductGraph, ...]
    classifications: tuple[Classification, ...]
    lattice: SharingLattice
    keys: tuple[frozenset[ComponentKey], ...]
    required_keys: tuple[frozenset[ComponentKey], ...]
    optional_keys: tuple[frozenset[ComponentKey], ...]

    @property
    def n(self) -> int:
        return len(self.products)

    @property
    def product_ids(self) -> tuple[str, ...]:
        return self.lattice.product_ids

    def check_index(self, i: int) -> int:
        if not isinstance(i, int) or not 0 <= i < self.n:
            raise PlabilityError("E_BAD_INDEX", f"product index {i!r} out of range 0..{self.n - 1}")
        return i

    def check_pair(self, i: int, j: int) -> tuple[int, int]:
        self.check_index(i)
        self.check_index(j)
        if i == j:
            raise PlabilityError("E_SAME_PRODUCT", f"pairwise metric needs two products, got {i} twice")
        return i, j

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]


def analyze_products(
    products: Sequence[ProductGraph],
    classifications: Optional[Sequence[Classification]] = None,
) -> ProductSetAnalysis:
    """Classify each product (unless classifications are given) and resolve identity."""
    products = tuple(products)
    if len(products) < 2:
        raise PlabilityError("E_TOO_FEW_PRODUCTS",
                             f"at least 2 products are required, got {len(products)}")
    ids = [p.product_id for p in products]
    if len(set(ids)) != len(ids):
        raise PlabilityError("E_DUP_PRODUCT", f"product ids must be unique: {ids}")
    if classifications is None:
        classifications = [classify_components(p) for p in products]
    keys, required, optional = [], [], []
    for product, cls in zip(products, classifications):
        by_name = product_keys(product)
        keys.append(frozenset(by_name.values()))
        required.append(frozenset(by_name[n] for n in cls.required))
        optional.append(frozenset(by_name[n] for n in cls.optional))
    return ProductSetAnalysis(
        products,
        tuple(classifications),
        SharingLattice(ids, keys),
        tuple(keys),
        tuple(required),
        tuple(optional),
    )


def _intersection(sets: Sequence[frozenset]) -> frozenset:
    ordered = sorted(sets, key=len)
    return ordered[0].intersection(*ordered[1:])


def common_keys(a: ProductSetAnalysis) -> frozenset[ComponentKey]:
    return _intersection(a.keys)


def common_required_keys(a: ProductSetAnalysis) -> frozenset[ComponentKey]:
    return _intersection(a.required_keys)


def common_optional_keys(a: ProductSetAnalysis) -> frozenset[ComponentKey]:
    return _intersection(a.optional_keys)


def size_of_commonality(a: ProductSetAnalysis) -> int:
    """SoC: number of component keys present in every product."""
    return len(common_keys(a))


@dataclass(frozen=True)
class StatusWarning:
    key: ComponentKey
    required_in: tuple[str, ...]
    optional_in: tuple[str, ...]

    def __str__(self) -> str:
        return (f"{self.key.name} is shared by all products but required in "
                f"{', '.join(self.required_in)} and optional in {', '.join(self.optional_in)}")


def commonality_consistency_check(a: ProductSetAnalysis) -> list[StatusWarning]:
    """Common keys whose required/optional status is not the same in every product.

    The list is empty exactly when SoC equals the sum of the common
    required and common optional counts.
    """
    out = []
    for key in sorted(common_keys(a), key=ComponentKey.sort_key):
        req = tuple(pid for pid, r in zip(a.product_ids, a.required_keys) if key in r)
        if req and len(req) != a.n:
            opt = tuple(pid for pid, r in zip(a.product_ids, a.required_keys) if key not in r)
            out.append(StatusWarning(key, req, opt))
    return out


def impact_of_commonality(a: ProductSetAnalysis) -> Optional[Ratio]:
    """IoC: share of the common core that is required everywhere."""
    return ratio(len(common_required_keys(a)), size_of_commonality(a))


def product_related_reusability(a: ProductSetAnalysis, i: int) -> Optional[Ratio]:
    """PrR_i = SoC / |C_i|."""
    a.check_index(i)
    return ratio(size_of_commonality(a), len(a.keys[i]))


def impact_of_product_related_reusability(a: ProductSetAnalysis, i: int) -> Optional[Ratio]:
    """IPrR_i = |common required| / |required of product i|."""
    a.check_index(i)
    return ratio(len(common_required_keys(a)), len(a.required_keys[i]))


def reusability_benefit(a: ProductSetAnalysis, i: int, j: int) -> Optional[Ratio]:
    """RB_ij = SoC / |C_i ∩ C_j|; symmetric in ``i`` and ``j``."""
    a.check_pair(i, j)
    return ratio(size_of_commonality(a), len(a.keys[i] & a.keys[j]))


def relationship_ratio(a: ProductSetAnalysis, i: int, j: int) -> Optional[Ratio]:
    """RR_ij: Jaccard index of the two products' key sets."""
    a.check_pair(i, j)
    return ratio(len(a.keys[i] & a.keys[j]), len(a.keys[i] | a.keys[j]))


def individualization_ratio(a: ProductSetAnalysis, i: int) -> Optional[Ratio]:
    """IR_i: fraction of product i's keys that no other product has."""
    a.check_index(i)
    return ratio(len(a.lattice.exact([i])), len(a.keys[i]))


@dataclass(frozen=True)
class MetricGrid:
    """Every metric for one analysis, in the shape of the results table."""

    soc: int
    ioc: Optional[Ratio]
    prr: tuple[Optional[Ratio], ...]
    iprr: tuple[Optional[Ratio], ...]
    ir: tuple[Optional[Ratio], ...]
    rb: dict[tuple[int, int], Optional[Ratio]]
    rr: dict[tuple[int, int], Optional[Ratio]]


def compute_all(a: ProductSetAnalysis) -> MetricGrid:
    # compute the shared quantities once; the per-metric functions above
    # recompute them and would be quadratic on large product sets
    common = common_keys(a)
    common_req = common_required_keys(a)
    soc = len(common)
    prr = tuple(ratio(soc, len(k)) for k in a.keys)
    iprr = tuple(ratio(len(common_req), len(r)) for r in a.required_keys)
    ir = tuple(ratio(len(a.lattice.exact([i])), len(a.keys[i])) for i in range(a.n))
    rb, rr = {}, {}
    for i, j in a.pairs():
        inter = len(a.keys[i] & a.keys[j])
        rb[i, j] = ratio(soc, inter)
        rr[i, j] = ratio(inter, len(a.keys[i]) + len(a.keys[j]) - inter)
    return MetricGrid(soc, ratio(len(common_req), soc), prr, iprr, ir, rb, rr)
