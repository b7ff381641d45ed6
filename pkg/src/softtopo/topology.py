"""Soft topologies over a finite context."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .core import (
    Context,
    SoftPoint,
    SoftSet,
    same_context,
)
from .errors import BudgetExceededError, NotATopologyError, NotOpenError
from .verdict import PASS, Verdict


@dataclass(frozen=True, eq=False)
class SoftTopology:
    """A soft topology: deduplicated opens sorted by canonical bitstring.

    Build one with :func:`make_topology` (validated) or
    :func:`generate_from_subbase`.
    """

    context: Context
    opens: tuple
    _bits: frozenset = field(init=False, repr=False)
    _closed: tuple = field(init=False, repr=False)

    def __post_init__(self):
        bits = frozenset(o.bits for o in self.opens)
        full = self.context.full_mask
        object.__setattr__(self, "_bits", bits)
        object.__setattr__(self, "_closed", tuple(full & ~b for b in bits))

    @classmethod
    def _from_bits(cls, ctx: Context, bits: Iterable[int]) -> SoftTopology:
        ordered = sorted(set(bits), key=ctx.bitstring)
        return cls(ctx, tuple(SoftSet(ctx, b) for b in ordered))

    @property
    def open_bits(self) -> frozenset:
        return self._bits

    def __len__(self):
        return len(self.opens)

    def __contains__(self, f: SoftSet) -> bool:
        return is_open(f, self)

    def __eq__(self, other):
        if not isinstance(other, SoftTopology):
            return NotImplemented
        return self.context == other.context and self._bits == other._bits

    def __hash__(self):
        return hash((self.context, self._bits))

    def __repr__(self):
        return f"SoftTopology({len(self.opens)} opens over {self.context.size} bits)"

    def to_canonical(self) -> list:
        return [o.to_canonical() for o in self.opens]


def _family_bits(ctx: Context, family: Iterable[SoftSet]) -> set[int]:
    out = set()
    for f in family:
        same_context(ctx, f.context)
        out.add(f.bits)
    return out


def is_topology(ctx: Context, family: Iterable[SoftSet]) -> Verdict:
    """Check the four soft topology axioms.

    Closure under unions of arbitrary subfamilies follows from binary
    closure when the family is finite, so only pairs are examined.
    """
    bits = _family_bits(ctx, family)
    if 0 not in bits:
        return Verdict(False, "null")
    if ctx.full_mask not in bits:
        return Verdict(False, "absolute")
    ordered = sorted(bits, key=ctx.bitstring)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if a & b not in bits:
                return Verdict(False, "intersection", (SoftSet(ctx, a), SoftSet(ctx, b)))
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if a | b not in bits:
                return Verdict(False, "union", (SoftSet(ctx, a), SoftSet(ctx, b)))
    return PASS


def make_topology(ctx: Context, family: Iterable[SoftSet]) -> SoftTopology:
    family = list(family)
    verdict = is_topology(ctx, family)
    if not verdict:
        raise NotATopologyError(verdict)
    return SoftTopology._from_bits(ctx, (f.bits for f in family))


def indiscrete(ctx: Context) -> SoftTopology:
    return SoftTopology._from_bits(ctx, {0, ctx.full_mask})


def discrete(ctx: Context) -> SoftTopology:
    return SoftTopology._from_bits(ctx, range(1 << ctx.size))


def finite_intersections(ctx: Context, family: Iterable[SoftSet],
                         max_size: int | None = None) -> set[int]:
    """Bitmasks of all finite intersections of ``family``.

    The empty intersection contributes the absolute soft set.
    """
    inter = {ctx.full_mask}
    for s in _family_bits(ctx, family):
        inter |= {r & s for r in inter}
        if max_size is not None and len(inter) > max_size:
            raise BudgetExceededError(f"more than {max_size} finite intersections")
    return inter


def _union_closure(bases: Iterable[int], max_size: int | None) -> set[int]:
    unions = {0}
    for b in bases:
        unions |= {u | b for u in unions}
        if max_size is not None and len(unions) > max_size:
            raise BudgetExceededError(f"topology exceeds {max_size} opens")
    return unions


def generate_from_subbase(ctx: Context, subbase: Iterable[SoftSet],
                          max_opens: int | None = None) -> SoftTopology:
    """Smallest soft topology containing ``subbase``.

    Null and absolute are adjoined, the family is closed under binary
    intersection, then under binary union. Each closure is built
    incrementally (adding one generator at a time), which reaches the same
    fixpoint as repeated pairwise sweeps.
    """
    inter = finite_intersections(ctx, subbase, max_opens)
    inter.add(0)
    return SoftTopology._from_bits(ctx, _union_closure(inter, max_opens))


def _check_members_open(family: Iterable[SoftSet], topology: SoftTopology) -> list[int]:
    bits = []
    for f in family:
        same_context(topology.context, f.context)
        if f.bits not in topology.open_bits:
            raise NotOpenError(f"{f!r} is not open in the topology")
        bits.append(f.bits)
    return bits


def is_base(base: Iterable[SoftSet], topology: SoftTopology) -> bool:
    """True iff every open is the soft union of the members of ``base`` inside it."""
    bits = _check_members_open(base, topology)
    for o in topology.open_bits:
        acc = 0
        for b in bits:
            if b & ~o == 0:
                acc |= b
        if acc != o:
            return False
    return True


def is_subbase(subbase: Iterable[SoftSet], topology: SoftTopology) -> bool:
    subbase = list(subbase)
    _check_members_open(subbase, topology)
    return generate_from_subbase(topology.context, subbase) == topology


def is_open(f: SoftSet, topology: SoftTopology) -> bool:
    same_context(topology.context, f.context)
    return f.bits in topology.open_bits


def closed_sets(topology: SoftTopology) -> tuple:
    ctx = topology.context
    return tuple(SoftSet(ctx, b) for b in sorted(topology._closed, key=ctx.bitstring))


def is_closed(f: SoftSet, topology: SoftTopology) -> bool:
    same_context(topology.context, f.context)
    return topology.context.full_mask & ~f.bits in topology.open_bits


def closure_bits(bits: int, topology: SoftTopology) -> int:
    acc = topology.context.full_mask
    for c in topology._closed:
        if bits & ~c == 0:
            acc &= c
    return acc


def closure(f: SoftSet, topology: SoftTopology) -> SoftSet:
    """Soft intersection of every closed soft set containing ``f``."""
    same_context(topology.context, f.context)
    return SoftSet(f.context, closure_bits(f.bits, topology))


def is_neighbourhood(n: SoftSet, pt: SoftPoint, topology: SoftTopology) -> bool:
    same_context(topology.context, n.context)
    same_context(topology.context, pt.context)
    mask = 1 << pt.bit
    return any(o & mask and o & ~n.bits == 0 for o in topology.open_bits)


class Comparison(str, enum.Enum):
    FINER = "finer"
    COARSER = "coarser"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def compare(t1: SoftTopology, t2: SoftTopology) -> Comparison:
    """How ``t1`` relates to ``t2``: FINER means ``t1`` contains every open of ``t2``."""
    same_context(t1.context, t2.context)
    a, b = t1.open_bits, t2.open_bits
    if a == b:
        return Comparison.EQUAL
    if a >= b:
        return Comparison.FINER
    if a <= b:
        return Comparison.COARSER
    return Comparison.INCOMPARABLE


def trace_table(ctx: Context, sub: Context) -> list[int]:
    """For each bit of ``sub``, the bit of ``ctx`` it restricts."""
    table = []
    for param in sub.parameters:
        p = ctx.parameter_index(param)
        for elem in sub.universe:
            table.append(ctx.bit(ctx.element_index(elem), p))
    return table


def restrict_bits(bits: int, table: list[int]) -> int:
    out = 0
    for k, src in enumerate(table):
        if bits >> src & 1:
            out |= 1 << k
    return out


def subspace_context(ctx: Context, elements: Iterable[Hashable],
                     parameters: Iterable[Hashable]) -> Context:
    keep_u = set(elements)
    keep_p = set(parameters)
    for e in keep_u:
        ctx.element_index(e)
    for p in keep_p:
        ctx.parameter_index(p)
    if not keep_p:
        raise ValueError("subspace parameter set must be nonempty")
    return Context(
        tuple(u for u in ctx.universe if u in keep_u),
        tuple(p for p in ctx.parameters if p in keep_p),
    )


def trace(f: SoftSet, sub: Context) -> SoftSet:
    """Restrict ``f`` to a sub-universe and sub-parameter set."""
    return SoftSet(sub, restrict_bits(f.bits, trace_table(f.context, sub)))


def subspace_topology(topology: SoftTopology, elements: Iterable[Hashable],
                      parameters: Iterable[Hashable]) -> tuple[Context, SoftTopology]:
    """Trace topology on the sub-context (elements, parameters).

    Element and parameter order follow the parent context.
    """
    sub = subspace_context(topology.context, elements, parameters)
    table = trace_table(topology.context, sub)
    traces = {restrict_bits(o, table) for o in topology.open_bits}
    return sub, SoftTopology._from_bits(sub, traces)
