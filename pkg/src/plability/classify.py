"""Required/optional partition of a product's components."""

from __future__ import annotations

from collections import defaultdict, deque
from typing import Iterable, Optional

from .model import Classification, PlabilityError, ProductGraph, Status


def find_isolated(product: ProductGraph) -> frozenset[str]:
    """Components that are neither source nor target of any edge."""
    touched = set()
    for edge in product.edges:
        touched.add(edge.source)
        touched.add(edge.target)
    return product.component_names - touched


def required_closure(product: ProductGraph, start: Iterable[str]) -> frozenset[str]:
    """Everything connected to ``start`` through REQUIRED edges, in either direction.

    Edges are followed against their direction as well because a component
    that depends on a required one through a required edge is itself needed.
    """
    neighbours = defaultdict(set)
    for edge in product.edges:
        if edge.status is Status.REQUIRED:
            neighbours[edge.source].add(edge.target)
            neighbours[edge.target].add(edge.source)
    seen = set(start)
    pending = deque(seen)
    while pending:
        node = pending.popleft()
        for nxt in neighbours[node]:
            if nxt not in seen:
                seen.add(nxt)
                pending.append(nxt)
    return frozenset(seen)


def _check_start(product: ProductGraph, start: Iterable[str]):
    missing = sorted(n for n in start if not product.has_component(n))
    if missing:
        raise PlabilityError(
            "E_START_NOT_FOUND",
            f"start components {missing} do not exist in product {product.product_id}")


def classify_components(
    product: ProductGraph, start: Optional[Iterable[str]] = None
) -> Classification:
    """Partition ``product`` into required and optional components.

    ``start`` overrides the product's own start set. Declared REQUIRED
    components join the start set; a declared classification alone is used
    verbatim only when there is no start set and it covers every component.
    """
    start_set = frozenset(product.start_set if start is None else start)
    _check_start(product, start_set)
    names = product.component_names
    isolated = find_isolated(product)

    if not start_set:
        if set(product.declared) != names:
            raise PlabilityError(
                "E_NO_CLASSIFICATION_BASIS",
                f"product {product.product_id} has no start set and no complete "
                "declared classification")
        required = frozenset(n for n, s in product.declared.items() if s is Status.REQUIRED)
        return Classification(required, names - required, isolated)

    effective = start_set | {n for n, s in product.declared.items() if s is Status.REQUIRED}
    required = required_closure(product, effective)
    return Classification(required, names - required, isolated)


def classification_mismatches(
    product: ProductGraph, start: Optional[Iterable[str]] = None
) -> list[tuple[str, Status, Status]]:
    """``(name, declared, derived)`` for every declaration the graph disagrees with.

    The derivation here uses the start set alone, so a ``classify required``
    line that the graph cannot justify is reported even though it still
    seeds the traversal in ``classify_components``.
    """
    start_set = frozenset(product.start_set if start is None else start)
    if not start_set or not product.declared:
        return []
    _check_start(product, start_set)
    derived = required_closure(product, start_set)
    out = []
    for name in sorted(product.declared):
        status = Status.REQUIRED if name in derived else Status.OPTIONAL
        if status is not product.declared[name]:
            out.append((name, product.declared[name], status))
    return out
