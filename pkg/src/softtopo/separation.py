"""Separation predicates for families of soft mappings and the embedding lemma checker.

A family of continuous soft mappings that separates soft points and
separates soft points from soft closed sets should make the diagonal into
the product space a soft embedding. :func:`check_embedding_lemma` evaluates
hypotheses and conclusion on one finite instance; :func:`random_instance`
produces seeded instances for bulk verification.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .core import Context, SoftSet, iter_bits, point_from_bit, same_context
from .errors import BudgetExceededError
from .mapping import (
    SoftMapping,
    corestriction,
    is_continuous,
    is_embedding,
)
from .product import diagonal_mapping, product_topology
from .topology import SoftTopology, closure_bits, generate_from_subbase, is_closed
from .verdict import Verdict

HYPOTHESES_HOLD = "HYPOTHESES_HOLD"
HYPOTHESES_FAIL = "HYPOTHESES_FAIL"
CONCLUSION_HOLDS = "CONCLUSION_HOLDS"
CONCLUSION_FAILS = "CONCLUSION_FAILS"


@dataclass(frozen=True)
class Budget:
    """Size limits for generated instances and product computations."""

    max_universe: int = 3
    max_parameters: int = 2
    max_factors: int = 3
    max_bits: int = 64
    max_opens: int = 4096

    @classmethod
    def parse(cls, text: str) -> Budget:
        """Parse ``"bits=64,opens=4096,universe=3,parameters=2,factors=3"`` (any subset)."""
        keys = {
            "universe": "max_universe",
            "parameters": "max_parameters",
            "factors": "max_factors",
            "bits": "max_bits",
            "opens": "max_opens",
        }
        values = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, value = part.partition("=")
            if not sep or key.strip() not in keys:
                raise ValueError(f"bad budget entry {part!r}")
            values[keys[key.strip()]] = int(value)
        return cls(**values)

    def validate(self):
        if min(self.max_universe, self.max_parameters, self.max_factors, self.max_bits) < 1:
            raise BudgetExceededError(f"unsatisfiable budget {self}")
        if self.max_opens < 2:
            raise BudgetExceededError(f"unsatisfiable budget {self}: need room for 2 opens")

    def to_dict(self) -> dict:
        return {
            "universe": self.max_universe,
            "parameters": self.max_parameters,
            "factors": self.max_factors,
            "bits": self.max_bits,
            "opens": self.max_opens,
        }


def _check_family(space: SoftTopology, spaces: Sequence[SoftTopology],
                  maps: Sequence[SoftMapping]):
    if len(spaces) != len(maps):
        raise ValueError("need exactly one target space per mapping")
    if not maps:
        raise ValueError("the family of mappings is empty")
    for t, m in zip(spaces, maps):
        same_context(space.context, m.source)
        same_context(t.context, m.target)


def _leg(ok, reason=None, witnesses=()):
    return Verdict(ok, reason, tuple(witnesses), label="leg")


def separates_points(space: SoftTopology, spaces: Sequence[SoftTopology],
                     maps: Sequence[SoftMapping]) -> Verdict:
    """Distinct soft points always have distinct images under some mapping.

    Witness on failure: two distinct soft points every mapping identifies.
    """
    _check_family(space, spaces, maps)
    seen = {}
    for k in range(space.context.size):
        key = tuple(m._bit_map[k] for m in maps)
        if key in seen:
            ctx = space.context
            return _leg(False, "separates_points",
                        (point_from_bit(ctx, seen[key]), point_from_bit(ctx, k)))
        seen[key] = k
    return _leg(True)


def separates_points_from_closed(space: SoftTopology, spaces: Sequence[SoftTopology],
                                 maps: Sequence[SoftMapping]) -> Verdict:
    """For closed C and a soft point outside C, some image point avoids cl(image C).

    Witness on failure: (C, point).
    """
    _check_family(space, spaces, maps)
    ctx = space.context
    full = ctx.full_mask
    cache = {}
    for c in sorted(space._closed, key=ctx.bitstring):
        outside = full & ~c
        if not outside:
            continue
        closures = []
        for i, (t, m) in enumerate(zip(spaces, maps)):
            img = m.image_bits(c)
            if (i, img) not in cache:
                cache[(i, img)] = closure_bits(img, t)
            closures.append(cache[(i, img)])
        for k in iter_bits(outside):
            if all(cl >> m._bit_map[k] & 1 for cl, m in zip(closures, maps)):
                return _leg(False, "separates_points_from_closed",
                            (SoftSet(ctx, c), point_from_bit(ctx, k)))
    return _leg(True)


@dataclass(frozen=True)
class SeparationReport:
    """Hypotheses and conclusion of the embedding lemma on one instance."""

    space: SoftTopology
    spaces: tuple
    maps: tuple
    continuity: tuple
    separates_points: Verdict
    separates_points_from_closed: Verdict
    embedding: Verdict
    diagonal: SoftMapping = field(repr=False)
    product: SoftTopology = field(repr=False)

    @property
    def hypotheses_hold(self) -> bool:
        return (all(self.continuity) and bool(self.separates_points)
                and bool(self.separates_points_from_closed))

    @property
    def conclusion_holds(self) -> bool:
        return bool(self.embedding)

    @property
    def is_violation(self) -> bool:
        return self.hypotheses_hold and not self.conclusion_holds

    @property
    def status(self) -> tuple[str, str]:
        return (HYPOTHESES_HOLD if self.hypotheses_hold else HYPOTHESES_FAIL,
                CONCLUSION_HOLDS if self.conclusion_holds else CONCLUSION_FAILS)

    def self_check(self) -> bool:
        """Re-verify every witness against the predicate it falsifies."""
        return all(check() for check in (
            self._check_continuity_witnesses,
            self._check_points_witness,
            self._check_closed_witness,
            self._check_embedding_witness,
        ))

    def _check_continuity_witnesses(self) -> bool:
        for v, m, t in zip(self.continuity, self.maps, self.spaces):
            if v:
                continue
            (o,) = v.witnesses
            if o.bits not in t.open_bits:
                return False
            if m.preimage_bits(o.bits) in self.space.open_bits:
                return False
        return True

    def _check_points_witness(self) -> bool:
        v = self.separates_points
        if v:
            return True
        p, q = v.witnesses
        if p == q:
            return False
        if any(m._bit_map[p.bit] != m._bit_map[q.bit] for m in self.maps):
            return False
        # the diagonal cannot tell them apart either
        return self.diagonal._bit_map[p.bit] == self.diagonal._bit_map[q.bit]

    def _check_closed_witness(self) -> bool:
        v = self.separates_points_from_closed
        if v:
            return True
        c, pt = v.witnesses
        if not is_closed(c, self.space) or c.bits >> pt.bit & 1:
            return False
        return all(
            closure_bits(m.image_bits(c.bits), t) >> m._bit_map[pt.bit] & 1
            for m, t in zip(self.maps, self.spaces)
        )

    def _check_embedding_witness(self) -> bool:
        v = self.embedding
        if v:
            return True
        cores, sub_top = corestriction(self.diagonal, self.product)
        if v.reason == "injective":
            if not v.witnesses:
                return len(set(cores.elem_map)) < len(cores.elem_map) or \
                    len(set(cores.param_map)) < len(cores.param_map)
            p, q = v.witnesses
            return p != q and cores._bit_map[p.bit] == cores._bit_map[q.bit]
        if v.reason == "surjective":
            return False  # the corestriction is onto by construction
        if v.reason == "continuity":
            (o,) = v.witnesses
            return (o.bits in sub_top.open_bits
                    and cores.preimage_bits(o.bits) not in self.space.open_bits)
        if v.reason == "open":
            (o,) = v.witnesses
            return (o.bits in self.space.open_bits
                    and cores.image_bits(o.bits) not in sub_top.open_bits)
        return False

    def to_dict(self) -> dict:
        hyp, concl = self.status
        witnesses = []
        for name, v in (("sep_points", self.separates_points),
                        ("sep_points_closed", self.separates_points_from_closed),
                        ("embedding", self.embedding)):
            if not v:
                witnesses.append({"check": name, **v.to_dict()})
        for i, v in enumerate(self.continuity):
            if not v:
                witnesses.append({"check": f"continuity[{i}]", **v.to_dict()})
        return {
            "hypotheses": {
                "continuity": [v.ok for v in self.continuity],
                "sep_points": self.separates_points.ok,
                "sep_points_closed": self.separates_points_from_closed.ok,
            },
            "conclusion": {"embedding": self.embedding.ok},
            "status": {"hypotheses": hyp, "conclusion": concl},
            "violation": self.is_violation,
            "self_check": self.self_check(),
            "witnesses": witnesses,
        }


def check_embedding_lemma(space: SoftTopology, spaces: Sequence[SoftTopology],
                          maps: Sequence[SoftMapping],
                          budget: Budget | None = None) -> SeparationReport:
    """Evaluate every hypothesis and the conclusion; raises if the product is over budget."""
    budget = budget or Budget()
    spaces, maps = tuple(spaces), tuple(maps)
    _check_family(space, spaces, maps)
    bits = 1
    for t in spaces:
        bits *= t.context.size
    if bits > budget.max_bits:
        raise BudgetExceededError(f"product soft sets need {bits} bits (budget {budget.max_bits})")
    pc, prod = product_topology(spaces, budget.max_opens)
    diagonal = diagonal_mapping(space.context, maps, pc)
    return SeparationReport(
        space=space,
        spaces=spaces,
        maps=maps,
        continuity=tuple(is_continuous(m, space, t) for m, t in zip(maps, spaces)),
        separates_points=separates_points(space, spaces, maps),
        separates_points_from_closed=separates_points_from_closed(space, spaces, maps),
        embedding=is_embedding(diagonal, space, prod),
        diagonal=diagonal,
        product=prod,
    )


def render_counterexample(report: SeparationReport) -> str:
    lines = [
        "=" * 72,
        "EMBEDDING LEMMA VIOLATION: hypotheses hold but the diagonal is not an embedding",
        "=" * 72,
        f"source context: universe={list(report.space.context.universe)} "
        f"parameters={list(report.space.context.parameters)}",
        f"source opens: {report.space.to_canonical()}",
    ]
    for i, (t, m) in enumerate(zip(report.spaces, report.maps)):
        lines.append(f"factor {i}: universe={list(t.context.universe)} "
                     f"parameters={list(t.context.parameters)}")
        lines.append(f"  opens: {t.to_canonical()}")
        lines.append(f"  map: {m.to_tables()}")
    lines.append(f"embedding verdict: {report.embedding.to_dict()}")
    lines.append("=" * 72)
    return "\n".join(lines)


# -- random instances ---------------------------------------------------------

def _names(prefix: str, n: int) -> tuple:
    return tuple(f"{prefix}{i}" for i in range(n))


def _random_soft_set(rng: random.Random, ctx: Context) -> SoftSet:
    return SoftSet(ctx, rng.getrandbits(ctx.size) if ctx.size else 0)


def _random_topology(rng: random.Random, ctx: Context, budget: Budget) -> SoftTopology:
    roll = rng.random()
    if roll < 0.1:
        subbase = []
    elif roll < 0.2:
        subbase = [SoftSet(ctx, 1 << k) for k in range(ctx.size)]
    else:
        subbase = [_random_soft_set(rng, ctx) for _ in range(rng.randint(1, 4))]
    return generate_from_subbase(ctx, subbase, budget.max_opens)


def _random_table(rng: random.Random, n_src: int, n_tgt: int, injective: bool) -> tuple:
    if injective:
        return tuple(rng.sample(range(n_tgt), n_src))
    return tuple(rng.randrange(n_tgt) for _ in range(n_src))


def _random_factor(rng: random.Random, space: SoftTopology, index: int,
                   budget: Budget) -> tuple[SoftTopology, SoftMapping]:
    src = space.context
    if rng.random() < 0.5:
        # a copy of the source inside a (possibly larger) target: continuous and separating
        ctx = Context(_names(f"x{index}_", rng.randint(src.n_elements, budget.max_universe)),
                      _names(f"e{index}_", rng.randint(src.n_parameters, budget.max_parameters)))
        m = SoftMapping(src, ctx,
                        _random_table(rng, src.n_elements, ctx.n_elements, True),
                        _random_table(rng, src.n_parameters, ctx.n_parameters, True))
        images = [SoftSet(ctx, m.image_bits(o)) for o in space.open_bits]
        return generate_from_subbase(ctx, images, budget.max_opens), m
    ctx = Context(_names(f"x{index}_", rng.randint(1, budget.max_universe)),
                  _names(f"e{index}_", rng.randint(1, budget.max_parameters)))
    injective = rng.random() < 0.3
    elem = _random_table(rng, src.n_elements, ctx.n_elements,
                         injective and ctx.n_elements >= src.n_elements)
    param = _random_table(rng, src.n_parameters, ctx.n_parameters,
                          injective and ctx.n_parameters >= src.n_parameters)
    return _random_topology(rng, ctx, budget), SoftMapping(src, ctx, elem, param)


def random_instance(seed, budget: Budget | None = None, max_attempts: int = 1000):
    """Deterministic random (space, spaces, maps) within ``budget``.

    Candidates that overflow the budget (product bits or product opens)
    are discarded and redrawn from the same generator.
    """
    budget = budget or Budget()
    budget.validate()
    rng = random.Random(f"softtopo/{seed}")
    for _ in range(max_attempts):
        src = Context(_names("x", rng.randint(1, budget.max_universe)),
                      _names("e", rng.randint(1, budget.max_parameters)))
        try:
            space = _random_topology(rng, src, budget)
            spaces, maps = [], []
            for i in range(rng.randint(1, budget.max_factors)):
                t, m = _random_factor(rng, space, i, budget)
                spaces.append(t)
                maps.append(m)
            bits = 1
            for t in spaces:
                bits *= t.context.size
            if bits > budget.max_bits:
                continue
            product_topology(spaces, budget.max_opens)
        except BudgetExceededError:
            continue
        return space, tuple(spaces), tuple(maps)
    raise BudgetExceededError(f"no instance fits {budget} after {max_attempts} attempts")


def instance_size(space: SoftTopology, spaces: Sequence[SoftTopology]) -> dict:
    bits = 1
    for t in spaces:
        bits *= t.context.size
    _, prod = product_topology(tuple(spaces))
    return {
        "universe": max([space.context.n_elements] + [t.context.n_elements for t in spaces]),
        "parameters": max([space.context.n_parameters] + [t.context.n_parameters for t in spaces]),
        "factors": len(spaces),
        "bits": max(bits, space.context.size),
        "opens": max([len(space), len(prod)] + [len(t) for t in spaces]),
    }
