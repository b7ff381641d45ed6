"""Finite products of soft topological spaces."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .core import Context, SoftSet, same_context
from .errors import EmptyFamilyError
from .mapping import SoftMapping
from .topology import SoftTopology, generate_from_subbase


def _radix_weights(sizes: Sequence[int]) -> tuple:
    # last factor varies fastest (itertools.product order)
    weights = []
    w = 1
    for n in reversed(sizes):
        weights.append(w)
        w *= n
    return tuple(reversed(weights))


@dataclass(frozen=True)
class ProductContext(Context):
    """Context whose elements and parameters are tuples over ``factors``."""

    factors: tuple = ()
    _u_weights: tuple = field(init=False, repr=False, compare=False, hash=False)
    _p_weights: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "_u_weights",
                           _radix_weights([f.n_elements for f in self.factors]))
        object.__setattr__(self, "_p_weights",
                           _radix_weights([f.n_parameters for f in self.factors]))

    def encode_element(self, indices: Sequence[int]) -> int:
        return sum(i * w for i, w in zip(indices, self._u_weights))

    def decode_element(self, index: int) -> tuple:
        return tuple((index // w) % f.n_elements for w, f in zip(self._u_weights, self.factors))

    def encode_parameter(self, indices: Sequence[int]) -> int:
        return sum(i * w for i, w in zip(indices, self._p_weights))

    def decode_parameter(self, index: int) -> tuple:
        return tuple((index // w) % f.n_parameters for w, f in zip(self._p_weights, self.factors))

    def describe(self) -> dict:
        return {
            "factors": [
                {"universe": list(f.universe), "parameters": list(f.parameters)}
                for f in self.factors
            ]
        }


def product_context(factors: Iterable[Context]) -> ProductContext:
    factors = tuple(factors)
    if not factors:
        raise EmptyFamilyError("a product needs at least one factor")
    return ProductContext(
        tuple(itertools.product(*(f.universe for f in factors))),
        tuple(itertools.product(*(f.parameters for f in factors))),
        factors,
    )


def projection(pc: ProductContext, i: int) -> SoftMapping:
    if not 0 <= i < len(pc.factors):
        raise IndexError(f"factor index {i} out of range")
    return SoftMapping(
        pc,
        pc.factors[i],
        tuple(pc.decode_element(u)[i] for u in range(pc.n_elements)),
        tuple(pc.decode_parameter(p)[i] for p in range(pc.n_parameters)),
    )


def initial_subbase(ctx: Context, families: Sequence[Iterable[SoftSet]],
                    maps: Sequence[SoftMapping]) -> list[SoftSet]:
    """Preimages of every member of ``families[i]`` under ``maps[i]``."""
    if len(families) != len(maps):
        raise ValueError("need exactly one family per mapping")
    seen = set()
    for fam, m in zip(families, maps):
        same_context(ctx, m.source)
        for g in fam:
            same_context(m.target, g.context)
            seen.add(m.preimage_bits(g.bits))
    return [SoftSet(ctx, b) for b in sorted(seen)]


def initial_topology(ctx: Context, spaces: Sequence[SoftTopology],
                     maps: Sequence[SoftMapping],
                     max_opens: int | None = None) -> SoftTopology:
    """Coarsest topology on ``ctx`` making every ``maps[i]`` continuous into ``spaces[i]``."""
    for t, m in zip(spaces, maps):
        same_context(m.target, t.context)
    subbase = initial_subbase(ctx, [t.opens for t in spaces], maps)
    return generate_from_subbase(ctx, subbase, max_opens)


@lru_cache(maxsize=32)
def _product(spaces: tuple, max_opens: int | None):
    pc = product_context(t.context for t in spaces)
    projections = [projection(pc, i) for i in range(len(spaces))]
    return pc, initial_topology(pc, spaces, projections, max_opens)


def product_topology(spaces: Sequence[SoftTopology],
                     max_opens: int | None = None) -> tuple[ProductContext, SoftTopology]:
    spaces = tuple(spaces)
    if not spaces:
        raise EmptyFamilyError("a product needs at least one space")
    return _product(spaces, max_opens)


def diagonal_mapping(src: Context, maps: Sequence[SoftMapping],
                     target: ProductContext | None = None) -> SoftMapping:
    """Mapping ``x -> (phi_i(x))_i``, ``e -> (psi_i(e))_i`` into the product of the targets."""
    maps = list(maps)
    if not maps:
        raise EmptyFamilyError("diagonal of an empty family")
    for m in maps:
        same_context(src, m.source)
    if target is None:
        target = product_context(m.target for m in maps)
    else:
        if len(target.factors) != len(maps):
            raise ValueError("target product has the wrong number of factors")
        for f, m in zip(target.factors, maps):
            same_context(f, m.target)
    return SoftMapping(
        src,
        target,
        tuple(target.encode_element([m.elem_map[u] for m in maps])
              for u in range(src.n_elements)),
        tuple(target.encode_parameter([m.param_map[p] for m in maps])
              for p in range(src.n_parameters)),
    )
