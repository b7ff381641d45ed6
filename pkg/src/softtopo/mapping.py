"""Soft mappings induced by an element map and a parameter map."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Mapping

from .core import (
    Context,
    SoftPoint,
    SoftSet,
    iter_bits,
    name_to_json,
    point_from_bit,
    same_context,
)
from .errors import SoftTopologyError, UnknownNameError
from .topology import SoftTopology, subspace_topology
from .verdict import Verdict

_PASS = Verdict(True, label="leg")


@dataclass(frozen=True)
class SoftMapping:
    """``elem_map[u]`` and ``param_map[p]`` are target indices."""

    source: Context
    target: Context
    elem_map: tuple
    param_map: tuple
    _bit_map: tuple = field(init=False, repr=False, compare=False, hash=False)
    _fibers: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        elem_map = tuple(self.elem_map)
        param_map = tuple(self.param_map)
        if len(elem_map) != self.source.n_elements or len(param_map) != self.source.n_parameters:
            raise ValueError("mapping tables must be total on the source")
        if any(not 0 <= v < self.target.n_elements for v in elem_map):
            raise ValueError("element table leaves the target universe")
        if any(not 0 <= v < self.target.n_parameters for v in param_map):
            raise ValueError("parameter table leaves the target parameter set")
        object.__setattr__(self, "elem_map", elem_map)
        object.__setattr__(self, "param_map", param_map)

        # bit k of the source lands on bit_map[k] of the target;
        # fibers[t] is the mask of source bits landing on target bit t
        tgt = self.target
        bit_map = tuple(
            tgt.bit(elem_map[u], param_map[p])
            for p in range(self.source.n_parameters)
            for u in range(self.source.n_elements)
        )
        fibers = [0] * tgt.size
        for k, t in enumerate(bit_map):
            fibers[t] |= 1 << k
        object.__setattr__(self, "_bit_map", bit_map)
        object.__setattr__(self, "_fibers", tuple(fibers))

    def image_bits(self, bits: int) -> int:
        out = 0
        bit_map = self._bit_map
        for k in iter_bits(bits):
            out |= 1 << bit_map[k]
        return out

    def preimage_bits(self, bits: int) -> int:
        out = 0
        fibers = self._fibers
        for t in iter_bits(bits):
            out |= fibers[t]
        return out

    def to_tables(self) -> dict:
        src, tgt = self.source, self.target
        return {
            "elem": {str(name_to_json(src.universe[u])): name_to_json(tgt.universe[v])
                     for u, v in enumerate(self.elem_map)},
            "param": {str(name_to_json(src.parameters[p])): name_to_json(tgt.parameters[q])
                      for p, q in enumerate(self.param_map)},
        }


def soft_mapping(source: Context, target: Context,
                 elem: Mapping[Hashable, Hashable],
                 param: Mapping[Hashable, Hashable]) -> SoftMapping:
    """Build a mapping from name tables; both tables must be total."""
    for u in source.universe:
        if u not in elem:
            raise UnknownNameError("element", u)
    for p in source.parameters:
        if p not in param:
            raise UnknownNameError("parameter", p)
    for u in elem:
        source.element_index(u)
    for p in param:
        source.parameter_index(p)
    return SoftMapping(
        source,
        target,
        tuple(target.element_index(elem[u]) for u in source.universe),
        tuple(target.parameter_index(param[p]) for p in source.parameters),
    )


def identity_mapping(ctx: Context) -> SoftMapping:
    return SoftMapping(ctx, ctx, tuple(range(ctx.n_elements)), tuple(range(ctx.n_parameters)))


def is_injective(m: SoftMapping) -> bool:
    """Both component maps injective."""
    return len(set(m.elem_map)) == len(m.elem_map) and len(set(m.param_map)) == len(m.param_map)


def is_surjective(m: SoftMapping) -> bool:
    return (len(set(m.elem_map)) == m.target.n_elements
            and len(set(m.param_map)) == m.target.n_parameters)


def is_bijective(m: SoftMapping) -> bool:
    return is_injective(m) and is_surjective(m)


def image(m: SoftMapping, f: SoftSet) -> SoftSet:
    """Per target parameter, the union of element images over its parameter fiber."""
    same_context(m.source, f.context)
    return SoftSet(m.target, m.image_bits(f.bits))


def preimage(m: SoftMapping, g: SoftSet) -> SoftSet:
    """Soft inverse image; lives over the source parameters."""
    same_context(m.target, g.context)
    return SoftSet(m.source, m.preimage_bits(g.bits))


def image_of_point(m: SoftMapping, pt: SoftPoint) -> SoftPoint:
    same_context(m.source, pt.context)
    return SoftPoint(m.target, m.elem_map[pt.element], m.param_map[pt.parameter])


def compose(m2: SoftMapping, m1: SoftMapping) -> SoftMapping:
    """``m2`` after ``m1``."""
    same_context(m1.target, m2.source)
    return SoftMapping(
        m1.source,
        m2.target,
        tuple(m2.elem_map[v] for v in m1.elem_map),
        tuple(m2.param_map[q] for q in m1.param_map),
    )


def inverse(m: SoftMapping) -> SoftMapping:
    if not is_bijective(m):
        raise SoftTopologyError("only bijective soft mappings can be inverted")
    elem = [0] * m.target.n_elements
    for u, v in enumerate(m.elem_map):
        elem[v] = u
    param = [0] * m.target.n_parameters
    for p, q in enumerate(m.param_map):
        param[q] = p
    return SoftMapping(m.target, m.source, tuple(elem), tuple(param))


def _witness_order(opens):
    # smallest soft sets first, ties broken by element/parameter order
    return sorted(opens, key=lambda o: (bin(o.bits).count("1"), o.bits))


def _check_spaces(m: SoftMapping, t_src: SoftTopology, t_tgt: SoftTopology):
    same_context(m.source, t_src.context)
    same_context(m.target, t_tgt.context)


def is_continuous(m: SoftMapping, t_src: SoftTopology, t_tgt: SoftTopology) -> Verdict:
    """Every preimage of a target open is open; witness is the offending target open."""
    _check_spaces(m, t_src, t_tgt)
    src_opens = t_src.open_bits
    for o in _witness_order(t_tgt.opens):
        if m.preimage_bits(o.bits) not in src_opens:
            return Verdict(False, "continuity", (o,), label="leg")
    return _PASS


def is_continuous_pointwise(m: SoftMapping, t_src: SoftTopology, t_tgt: SoftTopology) -> Verdict:
    """Continuity checked soft point by soft point via neighbourhoods.

    Every neighbourhood of the image point contains an open one, and every
    neighbourhood of the point contains an open one with smaller image, so
    it suffices to range over open neighbourhoods on both sides.
    """
    _check_spaces(m, t_src, t_tgt)
    src_opens = sorted(t_src.open_bits, key=t_src.context.bitstring)
    images = {o: m.image_bits(o) for o in src_opens}
    for k in range(m.source.size):
        target_bit = 1 << m._bit_map[k]
        for g in t_tgt.opens:
            if not g.bits & target_bit:
                continue
            if not any(o >> k & 1 and images[o] & ~g.bits == 0 for o in src_opens):
                return Verdict(False, "continuity",
                               (point_from_bit(m.source, k), g), label="leg")
    return _PASS


def is_open_map(m: SoftMapping, t_src: SoftTopology, t_tgt: SoftTopology) -> Verdict:
    _check_spaces(m, t_src, t_tgt)
    tgt_opens = t_tgt.open_bits
    for o in _witness_order(t_src.opens):
        if m.image_bits(o.bits) not in tgt_opens:
            return Verdict(False, "open", (o,), label="leg")
    return _PASS


def _bijectivity_verdict(m: SoftMapping) -> Verdict:
    seen = {}
    for k, t in enumerate(m._bit_map):
        if t in seen:
            pts = (point_from_bit(m.source, seen[t]), point_from_bit(m.source, k))
            return Verdict(False, "injective", pts, label="leg")
        seen[t] = k
    if not is_injective(m):
        # empty universe: tables collide without any soft points to show it
        return Verdict(False, "injective", label="leg")
    if not is_surjective(m):
        missed = next(t for t in range(m.target.size) if t not in seen) if m.target.size else None
        witnesses = (point_from_bit(m.target, missed),) if missed is not None else ()
        return Verdict(False, "surjective", witnesses, label="leg")
    return _PASS


def is_homeomorphism(m: SoftMapping, t_src: SoftTopology, t_tgt: SoftTopology) -> Verdict:
    """Bijective, continuous, and open (equivalently: inverse continuous)."""
    _check_spaces(m, t_src, t_tgt)
    for verdict in (_bijectivity_verdict(m),
                    is_continuous(m, t_src, t_tgt),
                    is_open_map(m, t_src, t_tgt)):
        if not verdict:
            return verdict
    return _PASS


def corestriction(m: SoftMapping, t_tgt: SoftTopology) -> tuple[SoftMapping, SoftTopology]:
    """``m`` with its target cut down to (element image, parameter image) and the trace topology."""
    same_context(m.target, t_tgt.context)
    tgt = m.target
    elems = {tgt.universe[v] for v in m.elem_map}
    params = {tgt.parameters[q] for q in m.param_map}
    sub, sub_top = subspace_topology(t_tgt, elems, params)
    cores = SoftMapping(
        m.source,
        sub,
        tuple(sub.element_index(tgt.universe[v]) for v in m.elem_map),
        tuple(sub.parameter_index(tgt.parameters[q]) for q in m.param_map),
    )
    return cores, sub_top


def is_embedding(m: SoftMapping, t_src: SoftTopology, t_tgt: SoftTopology) -> Verdict:
    """The corestriction onto the image, with the trace topology, is a homeomorphism."""
    _check_spaces(m, t_src, t_tgt)
    cores, sub_top = corestriction(m, t_tgt)
    return is_homeomorphism(cores, t_src, sub_top)
