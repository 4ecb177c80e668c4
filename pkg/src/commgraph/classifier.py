"""Connectivity and diameter bounds for Γ(Q_p, n) by rule application.

Each rule that applies contributes an interval inside {4, 5, 6}; the verdict
is their intersection and the trace keeps every contribution.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .arith import is_prime, require_prime
from .errors import InvalidArgument, SoundnessError
from .localfields import (
    first_congruence_witness,
    is_connected,
    small_prime_factor_criterion,
)

UNIVERSAL = (4, 6)

RULE_IDS = ("R1", "R2", "R3", "R4", "R5", "R6", "R7")

CITATIONS = {
    "R0": "a connected commuting graph of a matrix ring has diameter 4, 5 or 6",
    "R1": "Γ(Q_p,n) is connected iff n >= 3 and n is neither prime nor a power of p",
    "R2": "connected Γ(F,4) has diameter 4 for every field F; Γ(Q_p,4) is connected for p != 2",
    "R3": "n = q^2 with q >= 3 prime, q != p: Q_p has a cyclic Galois extension of degree n, "
          "so diam Γ(Q_p,n) >= 5",
    "R4": "diam Γ(Q_p,n) >= diam Γ(F_p,n): commuting chains over Z_p reduce to chains over F_p",
    "R5": "largest prime factor of n below sqrt(n) and n not a power of p: every degree-n "
          "extension has a subfield of degree < sqrt(n), so diam <= 5",
    "R6": "prime q | n, q != p, q^2 < n with (a) q ∤ p^f - 1 for all f | n, q ∤ f, or "
          "(b) p ≡ 1 mod q, or (c) p ∤ n: a degree-q subfield exists, so diam <= 5",
    "R7": "p = 2, n = 2q, q >= 7 prime: a degree-2q extension of Q_2 with exactly one "
          "intermediate field has Galois group meeting the index-q/index-2 subgroup "
          "hypotheses, so diam = 6",
}


@dataclass(frozen=True)
class KnownFFDiameter:
    p: int
    n: int
    diameter: float  # math.inf for disconnected
    provenance: str


COMPUTED = "computed by graph-engine"

# Only one literature value; the rest are reproduced by commgraph.graph in the tests.
KNOWN_FF_DIAMETERS: dict[tuple[int, int], KnownFFDiameter] = {
    (2, 15): KnownFFDiameter(2, 15, 5, "literature value, trusted input, not recomputed"),
    (2, 2): KnownFFDiameter(2, 2, math.inf, COMPUTED),
    (3, 2): KnownFFDiameter(3, 2, math.inf, COMPUTED),
    (5, 2): KnownFFDiameter(5, 2, math.inf, COMPUTED),
    (2, 3): KnownFFDiameter(2, 3, math.inf, COMPUTED),
    (3, 3): KnownFFDiameter(3, 3, math.inf, COMPUTED),
    (2, 4): KnownFFDiameter(2, 4, 4, COMPUTED),
}


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    citation: str
    lo: int | None  # None for the connectivity rule's "disconnected" contribution
    hi: int | None
    detail: str = ""


@dataclass
class DiameterVerdict:
    p: int
    n: int
    connected: bool
    lo: int | None = None
    hi: int | None = None
    nonclique_note: str | None = None
    trace: list[TraceEntry] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.connected and self.lo == self.hi

    @property
    def bounds(self) -> tuple[int, int] | None:
        return (self.lo, self.hi) if self.connected else None

    @property
    def glyph(self) -> str:
        return glyph_for(self)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "connected": self.connected,
            "lo": self.lo,
            "hi": self.hi,
            "exact": self.exact,
            "glyph": self.glyph,
            "nonclique_note": self.nonclique_note,
            "trace": [asdict(t) for t in self.trace],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DiameterVerdict":
        return cls(
            p=obj["p"],
            n=obj["n"],
            connected=obj["connected"],
            lo=obj["lo"],
            hi=obj["hi"],
            nonclique_note=obj["nonclique_note"],
            trace=[TraceEntry(**t) for t in obj["trace"]],
        )


def glyph_for(v: DiameterVerdict) -> str:
    if not v.connected:
        return "X"
    if v.lo == v.hi:
        return str(v.lo)
    if (v.lo, v.hi) == (4, 5):
        return "≤5"
    if (v.lo, v.hi) == (5, 6):
        return "≥5"
    if (v.lo, v.hi) == UNIVERSAL:
        return "?"
    raise SoundnessError(f"no glyph for interval [{v.lo},{v.hi}]")


def nonclique_annotation(p: int, n: int) -> str:
    """Diameter of the single non-clique component of a disconnected Γ(Q_p, n), n >= 3."""
    require_prime(p)
    if n < 3:
        raise InvalidArgument("annotation needs n >= 3")
    if is_connected(p, n):
        raise InvalidArgument(f"Γ(Q_{p},{n}) is connected")
    if is_prime(n):
        return "non-clique diameter 4"
    if n == p * p:
        return "non-clique diameter ≥ 5"
    return "unknown"


def _rule_contributions(p: int, n: int, disabled: frozenset) -> list[TraceEntry]:
    out = [TraceEntry("R0", CITATIONS["R0"], *UNIVERSAL, "connected")]
    if "R2" not in disabled and n == 4 and p != 2:
        out.append(TraceEntry("R2", CITATIONS["R2"], 4, 4, f"n = 4, p = {p}"))
    if "R3" not in disabled:
        r = math.isqrt(n)
        if r * r == n and r >= 3 and is_prime(r) and r != p:
            out.append(TraceEntry("R3", CITATIONS["R3"], 5, 6, f"n = {r}^2"))
    if "R4" not in disabled and (p, n) in KNOWN_FF_DIAMETERS:
        k = KNOWN_FF_DIAMETERS[(p, n)]
        if math.isinf(k.diameter):
            raise SoundnessError(f"Γ(F_{p},{n}) disconnected but Γ(Q_{p},{n}) connected")
        out.append(TraceEntry("R4", CITATIONS["R4"], int(k.diameter), 6,
                              f"diam Γ(F_{p},{n}) = {int(k.diameter)} ({k.provenance})"))
    if "R5" not in disabled and small_prime_factor_criterion(p, n):
        out.append(TraceEntry("R5", CITATIONS["R5"], 4, 5, "largest prime factor squared < n"))
    if "R6" not in disabled:
        hit = first_congruence_witness(p, n)
        if hit is not None:
            q, cond = hit
            out.append(TraceEntry("R6", CITATIONS["R6"], 4, 5, f"q = {q}, condition ({cond.tag}) holds"))
    if "R7" not in disabled and p == 2 and n % 2 == 0:
        q = n // 2
        if q >= 7 and is_prime(q):
            out.append(TraceEntry("R7", CITATIONS["R7"], 6, 6, f"n = 2*{q}"))
    return out


def classify(p: int, n: int, disabled=()) -> DiameterVerdict:
    """Connectivity and diameter interval for Γ(Q_p, n), with the rule trace.

    ``disabled`` names rules (R2..R7) to skip; used for ablation checks.
    """
    require_prime(p)
    if not isinstance(n, int) or n < 2:
        raise InvalidArgument(f"n must be an integer >= 2, got {n!r}")
    disabled = frozenset(disabled)
    if not is_connected(p, n):
        if n == 2:
            why, note = "n = 2", "all components are cliques"
        elif is_prime(n):
            why, note = f"n = {n} is prime", nonclique_annotation(p, n)
        else:
            why, note = f"n = {n} is a power of p = {p}", nonclique_annotation(p, n)
        trace = [TraceEntry("R1", CITATIONS["R1"], None, None, f"disconnected: {why}")]
        return DiameterVerdict(p, n, False, None, None, note, trace)

    trace = _rule_contributions(p, n, disabled)
    lo = max(t.lo for t in trace)
    hi = min(t.hi for t in trace)
    if lo > hi:
        raise SoundnessError(f"empty diameter interval for (p={p}, n={n}): " + json.dumps([asdict(t) for t in trace]))
    return DiameterVerdict(p, n, True, lo, hi, None, trace)


TABLE_NS = (4, 6, 8, 9, 10, 12, 14, 15, 16, 18)
TABLE_PS = (2, 3, 5, 7, 11, 13, 17, 19, 23)

_TEX_GLYPH = {"≤5": r"$\leq 5$", "≥5": r"$\geq 5$"}


def table_cells(ns=TABLE_NS, ps=TABLE_PS) -> list[list[str]]:
    return [[classify(p, n).glyph for p in ps] for n in ns]


def render_table(ns=TABLE_NS, ps=TABLE_PS, fmt: str = "markdown") -> str:
    """Grid of glyphs: rows n, columns p."""
    ns, ps = list(ns), list(ps)
    cells = table_cells(ns, ps)
    if fmt == "markdown":
        lines = ["| n \\ p | " + " | ".join(f"Q_{p}" for p in ps) + " |",
                 "|---|" + "---|" * len(ps)]
        for n, row in zip(ns, cells):
            lines.append(f"| n={n} | " + " | ".join(row) + " |")
        return "\n".join(lines) + "\n"
    if fmt == "tex":
        lines = [r"\begin{tabular}{c|" + "c|" * len(ps) + "}",
                 " & " + " & ".join(f"$\\mathbb{{Q}}_{{{p}}}$" for p in ps) + r" \\ \hline"]
        for n, row in zip(ns, cells):
            lines.append(f"$n={n}$ & " + " & ".join(_TEX_GLYPH.get(g, g) for g in row) + r" \\ \hline")
        lines.append(r"\end{tabular}")
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps({"ns": ns, "ps": ps, "cells": cells}, ensure_ascii=False) + "\n"
    raise InvalidArgument(f"unknown table format {fmt!r}")


__all__ = [
    "CITATIONS",
    "DiameterVerdict",
    "KNOWN_FF_DIAMETERS",
    "KnownFFDiameter",
    "TABLE_NS",
    "TABLE_PS",
    "TraceEntry",
    "classify",
    "glyph_for",
    "nonclique_annotation",
    "render_table",
    "table_cells",
]
