"""Self-contained JSON instance documents.

Layout::

    {
      "contexts":   {"X": {"universe": ["a", "b"], "parameters": ["e"]}},
      "soft_sets":  {"A": {"context": "X", "approximations": {"e": ["a"]}}},
      "subbases":   {"S": {"context": "X", "members": ["A", {"e": ["b"]}]}},
      "topologies": {"T": {"context": "X", "opens": ["null", "absolute", "A"]},
                     "G": {"context": "X", "generate": "S"}},
      "mappings":   {"m": {"source": "X", "target": "X",
                           "elem": {"a": "a", "b": "b"}, "param": {"e": "e"}}},
      "checks":     {"c": {"kind": "continuity", "map": "m",
                           "source": "T", "target": "G"}}
    }

A soft-set reference is either the name of an entry in ``soft_sets``
(``"null"`` and ``"absolute"`` are built in unless redefined) or an inline
``{parameter: [elements]}`` object over the surrounding context.
``generate`` takes a subbase name or an inline member list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .core import Context, SoftSet, absolute_soft_set, canonical_form, make_soft_set, null_soft_set
from .errors import SoftTopologyError
from .mapping import SoftMapping, soft_mapping
from .topology import SoftTopology, generate_from_subbase, make_topology

CHECK_FIELDS = {
    "topology": ("topology",),
    "closed": ("soft_set", "topology"),
    "closure": ("soft_set", "topology"),
    "neighbourhood": ("soft_set", "point", "topology"),
    "base": ("family", "topology"),
    "subbase": ("family", "topology"),
    "compare": ("left", "right"),
    "continuity": ("map", "source", "target"),
    "open_map": ("map", "source", "target"),
    "homeomorphism": ("map", "source", "target"),
    "embedding": ("map", "source", "target"),
    "separates_points": ("space", "family"),
    "separates_points_from_closed": ("space", "family"),
    "embedding_lemma": ("space", "family"),
}

# check fields that name a topology
_TOPOLOGY_FIELDS = ("topology", "left", "right", "source", "target", "space")


class InstanceError(SoftTopologyError):
    """Malformed instance document."""


class InstanceReferenceError(InstanceError):
    """A name in the document does not resolve."""


@dataclass(frozen=True)
class Subbase:
    context: str
    members: tuple


@dataclass(frozen=True)
class TopologyDecl:
    """Either verbatim ``opens`` (validated later) or a ``generate`` directive."""

    context: str
    opens: tuple | None = None
    generate: str | tuple | None = None


@dataclass
class Instance:
    contexts: dict = field(default_factory=dict)
    soft_sets: dict = field(default_factory=dict)
    subbases: dict = field(default_factory=dict)
    topologies: dict = field(default_factory=dict)
    mappings: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)

    def context(self, name: str) -> Context:
        try:
            return self.contexts[name]
        except KeyError:
            raise InstanceReferenceError(f"unknown context {name!r}") from None

    def soft_set(self, ref, ctx: Context) -> SoftSet:
        if isinstance(ref, str):
            if ref in self.soft_sets:
                f = self.soft_sets[ref]
                if f.context != ctx:
                    raise InstanceReferenceError(f"soft set {ref!r} lives over another context")
                return f
            if ref == "null":
                return null_soft_set(ctx)
            if ref == "absolute":
                return absolute_soft_set(ctx)
            raise InstanceReferenceError(f"unknown soft set {ref!r}")
        if isinstance(ref, dict):
            try:
                return make_soft_set(ctx, ref)
            except SoftTopologyError as exc:
                raise InstanceError(str(exc)) from None
        raise InstanceError(f"bad soft set reference {ref!r}")

    def subbase_members(self, name: str) -> tuple:
        try:
            return self.subbases[name].members
        except KeyError:
            raise InstanceReferenceError(f"unknown subbase {name!r}") from None

    def family(self, name: str) -> tuple:
        """Declared opens, or the subbase for a generated topology."""
        decl = self._decl(name)
        if decl.opens is not None:
            return decl.opens
        if isinstance(decl.generate, str):
            return self.subbase_members(decl.generate)
        return decl.generate

    def _decl(self, name: str) -> TopologyDecl:
        try:
            return self.topologies[name]
        except KeyError:
            raise InstanceReferenceError(f"unknown topology {name!r}") from None

    def topology(self, name: str, max_opens: int | None = None) -> SoftTopology:
        """Materialize a declared topology; raises NotATopologyError for bad verbatim families."""
        decl = self._decl(name)
        ctx = self.context(decl.context)
        if decl.opens is not None:
            return make_topology(ctx, decl.opens)
        return generate_from_subbase(ctx, self.family(name), max_opens)

    def mapping(self, name: str) -> SoftMapping:
        try:
            return self.mappings[name]
        except KeyError:
            raise InstanceReferenceError(f"unknown mapping {name!r}") from None


def _require(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise InstanceError(f"{where}: missing field {key!r}")
    return obj[key]


def _section(doc: dict, key: str) -> dict:
    sec = doc.get(key, {})
    if not isinstance(sec, dict):
        raise InstanceError(f"section {key!r} must be an object")
    return sec


def parse_instance(doc: Any) -> Instance:
    """Build an :class:`Instance` from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")
    inst = Instance()
    for name, entry in _section(doc, "contexts").items():
        try:
            inst.contexts[name] = Context(
                tuple(_require(entry, "universe", f"context {name}")),
                tuple(_require(entry, "parameters", f"context {name}")),
            )
        except (TypeError, ValueError) as exc:
            raise InstanceError(f"context {name}: {exc}") from None

    for name, entry in _section(doc, "soft_sets").items():
        ctx = inst.context(_require(entry, "context", f"soft set {name}"))
        approx = entry.get("approximations", {})
        if not isinstance(approx, dict):
            raise InstanceError(f"soft set {name}: approximations must be an object")
        inst.soft_sets[name] = inst.soft_set(approx, ctx)

    for name, entry in _section(doc, "subbases").items():
        ctx_name = _require(entry, "context", f"subbase {name}")
        ctx = inst.context(ctx_name)
        members = entry.get("members", [])
        if not isinstance(members, list):
            raise InstanceError(f"subbase {name}: members must be a list")
        inst.subbases[name] = Subbase(ctx_name, tuple(inst.soft_set(r, ctx) for r in members))

    for name, entry in _section(doc, "topologies").items():
        ctx_name = _require(entry, "context", f"topology {name}")
        ctx = inst.context(ctx_name)
        if ("opens" in entry) == ("generate" in entry):
            raise InstanceError(f"topology {name}: give exactly one of 'opens' or 'generate'")
        if "opens" in entry:
            opens = entry["opens"]
            if not isinstance(opens, list):
                raise InstanceError(f"topology {name}: opens must be a list")
            inst.topologies[name] = TopologyDecl(
                ctx_name, opens=tuple(inst.soft_set(r, ctx) for r in opens))
        else:
            gen = entry["generate"]
            if isinstance(gen, str):
                sub = inst.subbases.get(gen)
                if sub is None:
                    raise InstanceReferenceError(f"topology {name}: unknown subbase {gen!r}")
                if inst.contexts[sub.context] != ctx:
                    raise InstanceReferenceError(f"topology {name}: subbase over another context")
                inst.topologies[name] = TopologyDecl(ctx_name, generate=gen)
            elif isinstance(gen, list):
                inst.topologies[name] = TopologyDecl(
                    ctx_name, generate=tuple(inst.soft_set(r, ctx) for r in gen))
            else:
                raise InstanceError(f"topology {name}: generate must be a name or a list")

    for name, entry in _section(doc, "mappings").items():
        src = inst.context(_require(entry, "source", f"mapping {name}"))
        tgt = inst.context(_require(entry, "target", f"mapping {name}"))
        elem = _require(entry, "elem", f"mapping {name}")
        param = _require(entry, "param", f"mapping {name}")
        try:
            inst.mappings[name] = soft_mapping(src, tgt, elem, param)
        except (SoftTopologyError, TypeError) as exc:
            raise InstanceError(f"mapping {name}: {exc}") from None

    for name, entry in _section(doc, "checks").items():
        kind = _require(entry, "kind", f"check {name}")
        if kind not in CHECK_FIELDS:
            raise InstanceError(f"check {name}: unknown kind {kind!r}")
        for key in CHECK_FIELDS[kind]:
            _require(entry, key, f"check {name}")
        for key in _TOPOLOGY_FIELDS:
            if key in entry and entry[key] not in inst.topologies:
                raise InstanceReferenceError(f"check {name}: unknown topology {entry[key]!r}")
        if "map" in entry and entry["map"] not in inst.mappings:
            raise InstanceReferenceError(f"check {name}: unknown mapping {entry['map']!r}")
        if kind in ("separates_points", "separates_points_from_closed", "embedding_lemma"):
            if not isinstance(entry["family"], list) or not entry["family"]:
                raise InstanceError(f"check {name}: family must be a nonempty list")
            for item in entry["family"]:
                if _require(item, "map", f"check {name}") not in inst.mappings:
                    raise InstanceReferenceError(f"check {name}: unknown mapping {item['map']!r}")
                if _require(item, "space", f"check {name}") not in inst.topologies:
                    raise InstanceReferenceError(f"check {name}: unknown topology {item['space']!r}")
        inst.checks[name] = entry
    return inst


def load_instance(path) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: {exc}") from None
    return parse_instance(doc)


def _context_name(inst: Instance, ctx: Context) -> str:
    for name, c in inst.contexts.items():
        if c == ctx:
            return name
    raise InstanceReferenceError("soft set over an undeclared context")


def dump_instance(inst: Instance) -> dict:
    """Serialize to a JSON-ready document; soft sets are written in canonical form."""
    doc = {
        "contexts": {
            name: {"universe": list(c.universe), "parameters": list(c.parameters)}
            for name, c in inst.contexts.items()
        },
        "soft_sets": {
            name: {"context": _context_name(inst, f.context), "approximations": canonical_form(f)}
            for name, f in inst.soft_sets.items()
        },
        "subbases": {
            name: {"context": s.context, "members": [canonical_form(f) for f in s.members]}
            for name, s in inst.subbases.items()
        },
        "topologies": {},
        "mappings": {},
        "checks": {name: dict(entry) for name, entry in inst.checks.items()},
    }
    for name, decl in inst.topologies.items():
        entry = {"context": decl.context}
        if decl.opens is not None:
            entry["opens"] = [canonical_form(f) for f in decl.opens]
        elif isinstance(decl.generate, str):
            entry["generate"] = decl.generate
        else:
            entry["generate"] = [canonical_form(f) for f in decl.generate]
        doc["topologies"][name] = entry
    for name, m in inst.mappings.items():
        doc["mappings"][name] = {
            "source": _context_name(inst, m.source),
            "target": _context_name(inst, m.target),
            "elem": {u: m.target.universe[v] for u, v in zip(m.source.universe, m.elem_map)},
            "param": {p: m.target.parameters[q] for p, q in zip(m.source.parameters, m.param_map)},
        }
    return doc
