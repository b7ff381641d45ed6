from __future__ import annotations

from dataclasses import dataclass

from .core import SoftPoint, SoftSet, canonical_form, point_form


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: truth value, what failed, and the evidence.

    ``reason`` names the violated axiom (topology checks) or the failing
    leg (mapping checks); it is ``None`` when ``ok`` is true.
    """

    ok: bool
    reason: str | None = None
    witnesses: tuple = ()
    label: str = "axiom"

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            self.label: self.reason,
            "witnesses": [witness_form(w) for w in self.witnesses],
        }


PASS = Verdict(True)


def witness_form(w):
    if isinstance(w, SoftSet):
        return {"soft_set": canonical_form(w), "bits": w.bitstring()}
    if isinstance(w, SoftPoint):
        return {"point": point_form(w)}
    if isinstance(w, (tuple, list)):
        return [witness_form(x) for x in w]
    return w
