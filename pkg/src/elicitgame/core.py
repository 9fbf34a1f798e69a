"""Model parameters, strategy profiles and mechanism selectors.

Two members, H (high valuation) and L (low valuation), each choose a binary
incentive contribution ``d_m in {0, D}`` and then a binary effort level
``e_m in {0, 1}``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

__all__ = [
    "Params",
    "ContributionProfile",
    "EffortProfile",
    "MechanismKind",
    "Mechanism",
    "EA",
    "OA",
    "SV",
    "ValidationReport",
    "validate",
    "regime_threshold",
    "as_mechanism",
    "EFFORT_PROFILES",
    "contribution_profiles",
]


@dataclass(frozen=True)
class Params:
    """Model constants.

    Attributes:
        a: accuracy of a member's private solution when she exerts effort.
        c: cost of exerting effort.
        D: fixed incentive volume a contributing member puts in the pool.
        v_high: valuation of team accuracy by member H.
        v_low: valuation of team accuracy by member L.

    Only non-finite values are rejected here; the regime conditions are
    reported by :func:`validate`.
    """

    a: float = 0.8
    c: float = 0.18
    D: float = 0.15
    v_high: float = 2.0
    v_low: float = 1.0

    def __post_init__(self):
        for name in ("a", "c", "D", "v_high", "v_low"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"parameter {name} must be a finite real, got {value!r}")

    def with_(self, **changes) -> Params:
        return replace(self, **changes)

    def valuation(self, member: int) -> float:
        """Valuation of member 0 (H) or 1 (L)."""
        return self.v_high if member == 0 else self.v_low

    def as_dict(self) -> dict[str, float]:
        return {"a": self.a, "c": self.c, "D": self.D, "v_high": self.v_high, "v_low": self.v_low}


class EffortProfile(NamedTuple):
    """Stage-II strategies ``(e_H, e_L)``, each 0 or 1."""

    e_high: int
    e_low: int

    @property
    def total(self) -> int:
        return self.e_high + self.e_low


class ContributionProfile(NamedTuple):
    """Stage-I strategies ``(d_H, d_L)``, each exactly 0 or the volume D."""

    d_high: float
    d_low: float

    @classmethod
    def from_flags(cls, high: int, low: int, D: float) -> ContributionProfile:
        return cls(D if high else 0.0, D if low else 0.0)

    @property
    def pool(self) -> float:
        return self.d_high + self.d_low

    @property
    def flags(self) -> tuple[int, int]:
        return int(self.d_high != 0), int(self.d_low != 0)

    def is_valid(self, D: float) -> bool:
        return all(x == 0 or x == D for x in self)


EFFORT_PROFILES: tuple[EffortProfile, ...] = tuple(
    EffortProfile(h, l) for h in (0, 1) for l in (0, 1)
)


def contribution_profiles(D: float) -> tuple[ContributionProfile, ...]:
    """The four Stage-I profiles in lexicographic flag order."""
    return tuple(ContributionProfile.from_flags(h, l, D) for h in (0, 1) for l in (0, 1))


class MechanismKind(str, enum.Enum):
    EA = "ea"
    OA = "oa"
    SV = "sv"


@dataclass(frozen=True)
class Mechanism:
    """An allocation mechanism plus its convention switches.

    ``sv_zero_rule`` only matters for SV at ``e = (0, 0)`` where both Shapley
    values vanish: ``"equal"`` splits the pool in half, ``"none"`` allocates
    nothing.
    """

    kind: MechanismKind
    sv_zero_rule: str = field(default="equal")

    def __post_init__(self):
        object.__setattr__(self, "kind", MechanismKind(self.kind))
        if self.sv_zero_rule not in ("equal", "none"):
            raise ValueError(f"unknown sv_zero_rule {self.sv_zero_rule!r}")

    @property
    def name(self) -> str:
        if self.kind is MechanismKind.SV and self.sv_zero_rule != "equal":
            return f"sv[{self.sv_zero_rule}]"
        return self.kind.value

    def __str__(self):
        return self.name


EA = Mechanism(MechanismKind.EA)
OA = Mechanism(MechanismKind.OA)
SV = Mechanism(MechanismKind.SV)


def as_mechanism(mech: Mechanism | MechanismKind | str) -> Mechanism:
    """Coerce ``"ea"``, ``MechanismKind.OA``, ``"sv[none]"`` and friends."""
    if isinstance(mech, Mechanism):
        return mech
    if isinstance(mech, MechanismKind):
        return Mechanism(mech)
    text = str(mech).strip().lower()
    if text.endswith("]") and "[" in text:
        base, rule = text[:-1].split("[", 1)
        return Mechanism(MechanismKind(base), sv_zero_rule=rule)
    return Mechanism(MechanismKind(text))


def regime_threshold(a: float) -> float:
    """Valuation ratio above which members count as holding diverse valuations."""
    return max((14 * a - 5) / (6 * a - 1), (2 * a + 1) / (3 - 2 * a))


@dataclass(frozen=True)
class ValidationReport:
    checks: dict[str, bool]
    messages: tuple[str, ...]
    diverse_valuations: bool

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def validate(params: Params) -> ValidationReport:
    """Check the parameter regime without raising.

    Returns a report with one boolean per invariant and a flag telling
    whether ``v_high / v_low`` clears :func:`regime_threshold`.
    """
    p = params
    checks = {
        "a": 0.5 < p.a <= 1.0,
        "c": p.c > 0,
        "D": p.D > 0,
        "v_low": p.v_low > 0,
        "v_order": p.v_high > p.v_low,
    }
    texts = {
        "a": "a out of (0.5, 1]",
        "c": "c must be positive",
        "D": "D must be positive",
        "v_low": "v_low must be positive",
        "v_order": "v_high must exceed v_low",
    }
    messages = tuple(texts[k] for k, good in checks.items() if not good)
    diverse = False
    if checks["a"] and checks["v_low"]:
        diverse = p.v_high / p.v_low > regime_threshold(p.a)
    return ValidationReport(checks=checks, messages=messages, diverse_valuations=diverse)
