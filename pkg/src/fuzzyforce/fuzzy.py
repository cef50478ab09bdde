"""Mamdani inference on a seven-label linguistic partition.

Crisp inputs are fuzzified against triangular membership functions laid
out on the normalized universe [-1, 1], rules fire with min-composition,
and the output is collapsed with the center-of-area rule over singleton
consequents:

    dU = sum(mu_i * dU_i) / sum(mu_i)

Everything in this module is dimensionless; physical scaling belongs to
the controller layer.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class Label(enum.IntEnum):
    """Linguistic labels, ordered NL < NM < NS < ZR < PS < PM < PL.

    The integer value is the label's index on the partition (-3..3),
    so negation mirrors a label about ZR.
    """

    NL = -3
    NM = -2
    NS = -1
    ZR = 0
    PS = 1
    PM = 2
    PL = 3

    @property
    def negated(self) -> "Label":
        return Label(-int(self))


LABELS: tuple[Label, ...] = tuple(Label)


@dataclass(frozen=True)
class TriangularMF:
    """Symmetric triangular membership function.

    Degree is 1 at ``center``, falls off linearly, and is 0 outside
    ``[center - half_width, center + half_width]``.
    """

    center: float
    half_width: float

    def __post_init__(self) -> None:
        if not self.half_width > 0.0:
            raise ValueError(f"half_width must be > 0, got {self.half_width}")

    def degree(self, x: float) -> float:
        return max(0.0, 1.0 - abs(x - self.center) / self.half_width)


@dataclass(frozen=True)
class Partition:
    """Seven-label partition of the normalized universe [-1, 1].

    The default layout places the centers evenly at -1, -2/3, ... , 1
    with half-width equal to the spacing, which makes the membership
    degrees sum to 1 everywhere on the universe (unit partition) with at
    most two labels active at once.
    """

    mfs: tuple[TriangularMF, ...]

    def __post_init__(self) -> None:
        if len(self.mfs) != len(LABELS):
            raise ValueError(f"need {len(LABELS)} membership functions, got {len(self.mfs)}")
        centers = [mf.center for mf in self.mfs]
        if any(b <= a for a, b in zip(centers, centers[1:])):
            raise ValueError(f"centers must be strictly increasing, got {centers}")
        if self.center_of(Label.ZR) != 0.0:
            raise ValueError("ZR must be centered at 0")
        for lab in LABELS:
            mirror = self.mf_of(lab.negated)
            mine = self.mf_of(lab)
            if abs(mine.center + mirror.center) > 1e-9 or abs(mine.half_width - mirror.half_width) > 1e-9:
                raise ValueError("partition must be symmetric about 0")

    @classmethod
    def default(cls) -> "Partition":
        return cls(tuple(TriangularMF(i / 3.0, 1.0 / 3.0) for i in range(-3, 4)))

    @classmethod
    def from_centers(cls, centers: Sequence[float], half_widths: float | Sequence[float]) -> "Partition":
        if isinstance(half_widths, (int, float)):
            half_widths = [float(half_widths)] * len(centers)
        if len(centers) != len(LABELS) or len(half_widths) != len(LABELS):
            raise ValueError(f"need {len(LABELS)} centers and half-widths")
        return cls(tuple(TriangularMF(float(c), float(h)) for c, h in zip(centers, half_widths)))

    def mf_of(self, label: Label) -> TriangularMF:
        return self.mfs[int(label) + 3]

    def center_of(self, label: Label) -> float:
        return self.mf_of(label).center


def fuzzify(x: float, partition: Partition) -> dict[Label, float]:
    """Degrees of membership of ``x`` in every label of ``partition``.

    ``x`` is clamped to the universe [-1, 1] first, so saturated inputs
    land fully on the outermost labels.
    """
    x = min(1.0, max(-1.0, x))
    return {label: partition.mf_of(label).degree(x) for label in LABELS}


_AS_PRINTED_ROWS: dict[Label, tuple[str, ...]] = {
    # de:      NL    NM    NS    ZR    PS    PM    PL
    Label.PL: ("nl", "nm", "ns", "zr", "pm", "pl", "pl"),
    Label.PM: ("nl", "nl", "nm", "zr", "pm", "pl", "pl"),
    Label.PS: ("nl", "nl", "ns", "zr", "ps", "pl", "pl"),
    Label.ZR: ("nl", "nm", "ns", "zr", "ps", "pm", "pl"),
    Label.NS: ("nl", "nl", "ns", "zr", "ps", "pl", "pl"),
    Label.NM: ("nl", "nl", "nm", "zr", "pm", "pl", "pl"),
    Label.NL: ("nl", "nl", "nm", "zr", "ps", "pm", "pl"),
}

AS_PRINTED = "as_printed"
CANONICAL = "canonical"


@dataclass(frozen=True, eq=True)
class RuleBase:
    """Total 7x7 map from (error label, error-change label) to an output label.

    Two variants ship: ``as_printed`` reproduces the published rule table
    verbatim, ``canonical`` is the regular antisymmetric layout where the
    output index is the clamped sum of the input indices.  The printed
    table deviates from the canonical pattern in a number of cells, so
    closed-loop work defaults to ``canonical``.
    """

    variant: str
    _table: tuple[Label, ...]  # flattened row-major, e outer, de inner

    @classmethod
    def as_printed(cls) -> "RuleBase":
        flat = []
        for e in LABELS:
            row = _AS_PRINTED_ROWS[e]
            flat.extend(Label[cell.upper()] for cell in row)
        return cls(AS_PRINTED, tuple(flat))

    @classmethod
    def canonical(cls) -> "RuleBase":
        flat = []
        for e in LABELS:
            for de in LABELS:
                idx = max(-3, min(3, int(e) + int(de)))
                flat.append(Label(idx))
        return cls(CANONICAL, tuple(flat))

    @classmethod
    def from_name(cls, name: str) -> "RuleBase":
        if name == AS_PRINTED:
            return cls.as_printed()
        if name == CANONICAL:
            return cls.canonical()
        raise ValueError(f"unknown rule base {name!r} (expected {AS_PRINTED!r} or {CANONICAL!r})")

    def lookup(self, e: Label, de: Label) -> Label:
        return self._table[(int(e) + 3) * 7 + (int(de) + 3)]


@dataclass(frozen=True)
class FiredRule:
    """A rule activation: firing strength in [0, 1] and the consequent
    singleton value (the output label's center)."""

    strength: float
    value: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.strength <= 1.0:
            raise ValueError(f"strength must be in [0, 1], got {self.strength}")


def fire_rules(
    e_degrees: Mapping[Label, float],
    de_degrees: Mapping[Label, float],
    rules: RuleBase,
    out_partition: Partition,
) -> list[FiredRule]:
    """Fire every rule whose antecedents both hold to a positive degree.

    Strength is min(mu_e, mu_de); the consequent value is the center of
    the rule's output label in ``out_partition``.  With the default
    partition at most four rules fire.
    """
    fired = []
    for e_label in LABELS:
        mu_e = e_degrees.get(e_label, 0.0)
        if mu_e <= 0.0:
            continue
        for de_label in LABELS:
            mu = min(mu_e, de_degrees.get(de_label, 0.0))
            if mu > 0.0:
                out = rules.lookup(e_label, de_label)
                fired.append(FiredRule(mu, out_partition.center_of(out)))
    return fired


def defuzzify_coa(fired: Iterable[FiredRule]) -> float:
    """Center-of-area collapse of fired singleton consequents.

    Returns 0 when nothing fired; with a unit partition that case is
    unreachable, the guard just keeps the operation total.
    """
    num = 0.0
    den = 0.0
    for rule in fired:
        num += rule.strength * rule.value
        den += rule.strength
    if den == 0.0:
        return 0.0
    return num / den
