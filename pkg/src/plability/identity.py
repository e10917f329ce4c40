"""Syntactic signature identity across products and the resulting sharing regions.

Two components of different products count as the same asset when they have
the same name and the same effective interface: the signatures they declare
to accept plus the signatures of every edge that targets them. Status
(required/optional) is deliberately not part of the key.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .model import MessageSignature, PlabilityError, ProductGraph

Subset = tuple[int, ...]


@dataclass(frozen=True)
class ComponentKey:
    name: str
    interface: frozenset[MessageSignature] = frozenset()

    def sort_key(self) -> tuple:
        return (self.name, sorted(s.sort_key() for s in self.interface))

    def interface_text(self) -> str:
        return " ".join(str(s) for s in sorted(self.interface, key=MessageSignature.sort_key))

    def __str__(self) -> str:
        return f"{self.name} <{self.interface_text()}>" if self.interface else self.name


def product_keys(product: ProductGraph) -> dict[str, ComponentKey]:
    """Key of every component of ``product``, by component name."""
    incoming = defaultdict(set)
    for edge in product.edges:
        incoming[edge.target].add(edge.signature)
    return {
        name: ComponentKey(name, product.component(name).accepts | frozenset(incoming[name]))
        for name in product.component_names
    }


def component_key(product: ProductGraph, name: str) -> ComponentKey:
    if not product.has_component(name):
        raise PlabilityError("E_UNKNOWN_COMPONENT",
                             f"{name!r} is not a component of {product.product_id}")
    interface = set(product.component(name).accepts)
    interface.update(e.signature for e in product.edges if e.target == name)
    return ComponentKey(name, frozenset(interface))


def canonical_subset(subset: Iterable[int], n: int) -> Subset:
    out = tuple(sorted(set(subset)))
    if not out:
        raise PlabilityError("E_EMPTY_SUBSET", "subset of products must not be empty")
    if out[0] < 0 or out[-1] >= n:
        raise PlabilityError("E_BAD_INDEX", f"product index out of range 0..{n - 1}: {out}")
    return out


class SharingLattice:
    """Which component keys live in which products.

    ``exact(U)`` is the set of keys found in precisely the products ``U``;
    ``shared(T)`` those found in at least every product of ``T``. Only the
    non-empty exact regions are stored, so memory is linear in the number
    of keys regardless of how many products there are.
    """

    def __init__(self, product_ids: Sequence[str], key_sets: Sequence[frozenset[ComponentKey]]):
        if len(product_ids) != len(key_sets):
            raise ValueError("one key set per product expected")
        self.product_ids = tuple(product_ids)
        self.key_sets = tuple(key_sets)
        membership: dict[ComponentKey, list[int]] = defaultdict(list)
        for index, keys in enumerate(key_sets):
            for key in keys:
                membership[key].append(index)
        self.membership = {k: tuple(v) for k, v in membership.items()}
        regions: dict[Subset, set] = defaultdict(set)
        for key, where in self.membership.items():
            regions[where].add(key)
        self._regions = {u: frozenset(keys) for u, keys in regions.items()}
        self._name_counts = Counter(k.name for k in self.membership)

    @property
    def n(self) -> int:
        return len(self.product_ids)

    @property
    def universe(self) -> frozenset[ComponentKey]:
        return frozenset(self.membership)

    def exact(self, subset: Iterable[int]) -> frozenset[ComponentKey]:
        return self._regions.get(canonical_subset(subset, self.n), frozenset())

    def shared(self, subset: Iterable[int]) -> frozenset[ComponentKey]:
        subset = canonical_subset(subset, self.n)
        # intersect starting from the smallest set
        sets = sorted((self.key_sets[i] for i in subset), key=len)
        return frozenset(sets[0].intersection(*sets[1:]))

    def regions(self) -> Iterator[tuple[Subset, frozenset[ComponentKey]]]:
        """Non-empty exact regions, larger subsets first, then lexicographic."""
        for subset in sorted(self._regions, key=lambda u: (-len(u), u)):
            yield subset, self._regions[subset]

    def subsets(self) -> Iterator[Subset]:
        """Every non-empty subset of product indices, canonically ordered."""
        indices = range(self.n)
        for size in range(self.n, 0, -1):
            yield from combinations(indices, size)

    def label(self, key: ComponentKey) -> str:
        """Display name; keys whose name is not unique are suffixed with their products."""
        if self._name_counts[key.name] == 1:
            return key.name
        return f"{key.name}[{','.join(self.product_ids[i] for i in self.membership[key])}]"


def build_lattice(products: Sequence[ProductGraph]) -> SharingLattice:
    return SharingLattice(
        [p.product_id for p in products],
        [frozenset(product_keys(p).values()) for p in products],
    )


def shared_by_all(products: Sequence[ProductGraph], subset: Iterable[int]) -> frozenset[ComponentKey]:
    """Keys present in every product of ``subset`` (the full index set gives the common core)."""
    return build_lattice(products).shared(subset)


def exclusive_region(products: Sequence[ProductGraph], subset: Iterable[int]) -> frozenset[ComponentKey]:
    """Keys present in every product of ``subset`` and in no other product."""
    return build_lattice(products).exact(subset)
