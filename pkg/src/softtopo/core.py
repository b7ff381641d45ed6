"""Soft sets over a finite universe, stored as integer bitmasks.

A soft set ``F: E -> P(U)`` is flattened parameter-major: bit
``p * |U| + u`` is set iff element ``u`` belongs to the approximation of
parameter ``p``. Every soft set carries the full parameter set; parameters
not mentioned at construction get the empty approximation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import ContextMismatchError, EmptyFamilyError, UnknownNameError


@dataclass(frozen=True)
class Context:
    """A finite universe and a nonempty parameter set, both ordered."""

    universe: tuple
    parameters: tuple
    _elem_index: dict = field(init=False, repr=False, compare=False, hash=False)
    _param_index: dict = field(init=False, repr=False, compare=False, hash=False)
    _size: int = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        universe = tuple(self.universe)
        parameters = tuple(self.parameters)
        if not parameters:
            raise ValueError("parameter set must be nonempty")
        elem_index = {name: i for i, name in enumerate(universe)}
        param_index = {name: i for i, name in enumerate(parameters)}
        if len(elem_index) != len(universe):
            raise ValueError("duplicate element names in universe")
        if len(param_index) != len(parameters):
            raise ValueError("duplicate parameter names")
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "parameters", parameters)
        object.__setattr__(self, "_elem_index", elem_index)
        object.__setattr__(self, "_param_index", param_index)
        object.__setattr__(self, "_size", len(universe) * len(parameters))

    @property
    def n_elements(self) -> int:
        return len(self.universe)

    @property
    def n_parameters(self) -> int:
        return len(self.parameters)

    @property
    def size(self) -> int:
        """Number of bits in a soft set over this context."""
        return self._size

    @property
    def full_mask(self) -> int:
        return (1 << self._size) - 1

    def element_index(self, name: Hashable) -> int:
        try:
            return self._elem_index[name]
        except (KeyError, TypeError):
            raise UnknownNameError("element", name) from None

    def parameter_index(self, name: Hashable) -> int:
        try:
            return self._param_index[name]
        except (KeyError, TypeError):
            raise UnknownNameError("parameter", name) from None

    def bit(self, element: int, parameter: int) -> int:
        return parameter * len(self.universe) + element

    def row_mask(self, parameter: int) -> int:
        n = len(self.universe)
        return ((1 << n) - 1) << (parameter * n)

    def bitstring(self, bits: int) -> str:
        if not self._size:
            return ""
        return format(bits, f"0{self._size}b")[::-1]


def same_context(a: Context, b: Context) -> None:
    if a is not b and a != b:
        raise ContextMismatchError("operands belong to different contexts")


@dataclass(frozen=True)
class SoftSet:
    """Immutable soft set; ``bits`` holds the flattened membership matrix."""

    context: Context
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.context._size:
            raise ValueError(f"bit pattern {self.bits:#x} out of range for context")

    @classmethod
    def from_bitstring(cls, ctx: Context, text: str) -> SoftSet:
        if len(text) != ctx.size or set(text) - {"0", "1"}:
            raise ValueError(f"expected {ctx.size} characters of 0/1, got {text!r}")
        return cls(ctx, int(text[::-1], 2) if text else 0)

    def bitstring(self) -> str:
        return self.context.bitstring(self.bits)

    def approximation(self, parameter: Hashable) -> frozenset:
        """The subset of the universe attached to ``parameter``."""
        ctx = self.context
        p = ctx.parameter_index(parameter)
        row = self.bits >> (p * ctx.n_elements)
        return frozenset(u for i, u in enumerate(ctx.universe) if row >> i & 1)

    def rows(self) -> list[list[bool]]:
        ctx = self.context
        return [
            [bool(self.bits >> ctx.bit(u, p) & 1) for u in range(ctx.n_elements)]
            for p in range(ctx.n_parameters)
        ]

    def to_canonical(self) -> dict:
        return canonical_form(self)

    @property
    def is_null(self) -> bool:
        return self.bits == 0

    @property
    def is_absolute(self) -> bool:
        return self.bits == self.context.full_mask

    def __eq__(self, other):
        if other.__class__ is not self.__class__:
            return NotImplemented
        return self.bits == other.bits and (
            self.context is other.context or self.context == other.context)

    def __hash__(self):
        return hash((self.context, self.bits))

    @classmethod
    def _unchecked(cls, ctx: Context, bits: int) -> SoftSet:
        # hot path for results of set operations, which cannot leave the range
        f = object.__new__(cls)
        d = f.__dict__
        d["context"] = ctx
        d["bits"] = bits
        return f

    def __or__(self, other: SoftSet) -> SoftSet:
        ctx = self.context
        if other.context is not ctx:
            same_context(ctx, other.context)
        return SoftSet._unchecked(ctx, self.bits | other.bits)

    def __and__(self, other: SoftSet) -> SoftSet:
        ctx = self.context
        if other.context is not ctx:
            same_context(ctx, other.context)
        return SoftSet._unchecked(ctx, self.bits & other.bits)

    def __sub__(self, other: SoftSet) -> SoftSet:
        ctx = self.context
        if other.context is not ctx:
            same_context(ctx, other.context)
        return SoftSet._unchecked(ctx, self.bits & ~other.bits)

    def __invert__(self) -> SoftSet:
        ctx = self.context
        return SoftSet._unchecked(ctx, ((1 << ctx._size) - 1) & ~self.bits)

    def __le__(self, other: SoftSet) -> bool:
        return soft_subset(self, other)

    def __ge__(self, other: SoftSet) -> bool:
        return soft_subset(other, self)

    def __repr__(self):
        return f"SoftSet({canonical_form(self)!r})"


@dataclass(frozen=True)
class SoftPoint:
    """The soft point with support ``{element}`` at expressive ``parameter``.

    Both fields are indices into the context's orderings.
    """

    context: Context
    element: int
    parameter: int

    def __post_init__(self):
        if not 0 <= self.element < self.context.n_elements:
            raise IndexError(f"element index {self.element} out of range")
        if not 0 <= self.parameter < self.context.n_parameters:
            raise IndexError(f"parameter index {self.parameter} out of range")

    @property
    def bit(self) -> int:
        return self.context.bit(self.element, self.parameter)

    @property
    def element_name(self):
        return self.context.universe[self.element]

    @property
    def parameter_name(self):
        return self.context.parameters[self.parameter]

    def as_soft_set(self) -> SoftSet:
        return SoftSet(self.context, 1 << self.bit)

    def __repr__(self):
        return f"SoftPoint({self.element_name!r}, {self.parameter_name!r})"


def soft_point(ctx: Context, element: Hashable, parameter: Hashable) -> SoftPoint:
    return SoftPoint(ctx, ctx.element_index(element), ctx.parameter_index(parameter))


def point_from_bit(ctx: Context, bit: int) -> SoftPoint:
    p, u = divmod(bit, ctx.n_elements)
    return SoftPoint(ctx, u, p)


def make_soft_set(ctx: Context, approximations: Mapping[Hashable, Iterable[Hashable]]) -> SoftSet:
    """Build a soft set from ``{parameter: elements}``; unnamed parameters are empty."""
    bits = 0
    for param, elems in approximations.items():
        p = ctx.parameter_index(param)
        for elem in elems:
            bits |= 1 << ctx.bit(ctx.element_index(elem), p)
    return SoftSet(ctx, bits)


def null_soft_set(ctx: Context) -> SoftSet:
    return SoftSet(ctx, 0)


def absolute_soft_set(ctx: Context) -> SoftSet:
    return SoftSet(ctx, ctx.full_mask)


def all_soft_sets(ctx: Context) -> Iterator[SoftSet]:
    """Every soft set over ``ctx``, in increasing integer order."""
    for bits in range(1 << ctx.size):
        yield SoftSet(ctx, bits)


def soft_subset(f: SoftSet, g: SoftSet) -> bool:
    same_context(f.context, g.context)
    return f.bits & ~g.bits == 0


def soft_equal(f: SoftSet, g: SoftSet) -> bool:
    same_context(f.context, g.context)
    return f.bits == g.bits


def _common_context(family: Sequence[SoftSet]) -> Context:
    if not family:
        raise EmptyFamilyError("soft union/intersection needs a nonempty family")
    ctx = family[0].context
    for f in family[1:]:
        same_context(ctx, f.context)
    return ctx


def soft_union(family: Iterable[SoftSet]) -> SoftSet:
    family = list(family)
    ctx = _common_context(family)
    bits = 0
    for f in family:
        bits |= f.bits
    return SoftSet(ctx, bits)


def soft_intersection(family: Iterable[SoftSet]) -> SoftSet:
    family = list(family)
    ctx = _common_context(family)
    bits = ctx.full_mask
    for f in family:
        bits &= f.bits
    return SoftSet(ctx, bits)


def soft_complement(f: SoftSet) -> SoftSet:
    return SoftSet(f.context, f.context.full_mask & ~f.bits)


def soft_difference(f: SoftSet, g: SoftSet) -> SoftSet:
    same_context(f.context, g.context)
    return SoftSet(f.context, f.bits & ~g.bits)


def soft_disjoint(f: SoftSet, g: SoftSet) -> bool:
    same_context(f.context, g.context)
    return f.bits & g.bits == 0


def point_in(pt: SoftPoint, f: SoftSet) -> bool:
    same_context(pt.context, f.context)
    return bool(f.bits >> pt.bit & 1)


def enumerate_soft_points(ctx: Context) -> list[SoftPoint]:
    """All soft points, parameter-major (matching the bit layout)."""
    return [
        SoftPoint(ctx, u, p)
        for p in range(ctx.n_parameters)
        for u in range(ctx.n_elements)
    ]


def soft_points_of(f: SoftSet) -> list[SoftPoint]:
    return [point_from_bit(f.context, k) for k in iter_bits(f.bits)]


def iter_bits(bits: int) -> Iterator[int]:
    """Indices of the set bits of ``bits`` in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def name_to_json(name):
    if isinstance(name, tuple):
        return [name_to_json(n) for n in name]
    return name


def _name_key(name) -> str:
    if isinstance(name, tuple):
        return "(" + ",".join(_name_key(n) for n in name) + ")"
    return str(name)


def canonical_form(f: SoftSet) -> dict:
    """``{parameter: [elements...]}`` with empty approximations omitted.

    Keys follow parameter order and element lists follow universe order.
    Tuple-valued parameter names (product contexts) are rendered as
    ``"(e,f)"`` keys since JSON object keys must be strings.
    """
    ctx = f.context
    n = ctx.n_elements
    out = {}
    for p, param in enumerate(ctx.parameters):
        row = f.bits >> (p * n) & ((1 << n) - 1)
        if row:
            out[_name_key(param)] = [
                name_to_json(ctx.universe[u]) for u in range(n) if row >> u & 1
            ]
    return out


def point_form(pt: SoftPoint) -> list:
    return [name_to_json(pt.element_name), name_to_json(pt.parameter_name)]


def bitstring_sort_key(ctx: Context):
    """Sort key ordering bitmasks by their canonical bitstrings."""
    return ctx.bitstring
