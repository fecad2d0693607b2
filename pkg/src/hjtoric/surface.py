"""Orbifold Riemann surfaces, parabolic ruled surfaces and their slopes.

The main entry points build the data of a ruled surface
``P(O + L)`` over a genus ``g`` curve with orbifold points of orders
``q_j``: the weights ``p_j/q_j`` with ``p_j = -r mod q_j``, the integers
``n_j = (p_j + r)/q_j``, the degree of ``L = K^r ⊗ [A_j]^(r - n_j)`` and
the fiber chains of the iterated blow-up.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .chains import CurveChain, blowup_chain
from .errors import Degenerate, HypothesisViolation, UnsupportedDegree, UsageError
from .exact import as_rational, format_rational
from .toric import SingularType


class Section(enum.Enum):
    ZERO = "zero"
    INFINITY = "infinity"

    @classmethod
    def parse(cls, s) -> "Section":
        if isinstance(s, Section):
            return s
        try:
            return cls(str(s).lower())
        except ValueError as exc:
            raise UsageError(f"section must be 'zero' or 'infinity', got {s!r}") from exc

    def other(self) -> "Section":
        return Section.INFINITY if self is Section.ZERO else Section.ZERO


@dataclass(frozen=True)
class OrbifoldPoint:
    label: str
    order: int


@dataclass(frozen=True)
class OrbifoldRiemannSurface:
    genus: int
    points: tuple[OrbifoldPoint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if self.genus < 0:
            raise UsageError(f"genus must be >= 0, got {self.genus}")
        labels = [pt.label for pt in self.points]
        if len(set(labels)) != len(labels):
            raise UsageError("orbifold point labels must be distinct")
        for pt in self.points:
            if pt.order < 2:
                raise UsageError(f"orbifold point {pt.label} has order {pt.order} < 2")

    @classmethod
    def with_orders(cls, genus: int, orders: Sequence[int]) -> "OrbifoldRiemannSurface":
        return cls(genus, tuple(OrbifoldPoint(f"A{j}", q) for j, q in enumerate(orders, start=1)))


def euler_orb(s: OrbifoldRiemannSurface) -> Fraction:
    """``2 - 2g - sum(1 - 1/q_j)``."""
    return 2 - 2 * s.genus - sum((1 - Fraction(1, pt.order) for pt in s.points), Fraction(0))


@dataclass(frozen=True)
class ParabolicMark:
    base: str
    section: Section
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "section", Section.parse(self.section))
        w = as_rational(self.weight)
        object.__setattr__(self, "weight", w)
        if not 0 < w < 1:
            raise UsageError(f"parabolic weight must lie in (0, 1), got {w}")

    def to_dict(self):
        return {"base": self.base, "section": self.section.value, "weight": format_rational(self.weight)}


@dataclass(frozen=True)
class BundleSpec:
    """Formal description of ``L = K^r ⊗ [A_j]^(r - n_j) ⊗ L0``."""

    r: int
    n: tuple[int, ...]
    flat_twist: bool = False

    def degree(self, genus: int) -> int:
        chi = 2 - 2 * genus
        return -self.r * chi + sum(self.r - nj for nj in self.n)


@dataclass(frozen=True)
class ParabolicRuledSurface:
    genus: int
    degree: int
    marks: tuple[ParabolicMark, ...] = ()
    bundle: Optional[BundleSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "marks", tuple(self.marks))
        if self.genus < 0:
            raise UsageError(f"genus must be >= 0, got {self.genus}")
        bases = [m.base for m in self.marks]
        if len(set(bases)) != len(bases):
            raise UsageError("at most one marked point per fiber")
        if self.bundle is not None and self.bundle.degree(self.genus) != self.degree:
            raise UsageError(
                f"bundle description has degree {self.bundle.degree(self.genus)}, not {self.degree}"
            )

    def section_square(self, section: Section) -> int:
        # S0^2 = deg L, S_inf^2 = deg(O + L) - 2 deg L = -deg L
        return self.degree if Section.parse(section) is Section.ZERO else -self.degree

    def to_dict(self) -> dict:
        return {"genus": self.genus, "degree": self.degree, "marks": [m.to_dict() for m in self.marks]}

    @classmethod
    def from_dict(cls, doc: dict) -> "ParabolicRuledSurface":
        try:
            genus = _as_int(doc["genus"])
            degree = _as_int(doc["degree"])
            marks = tuple(
                ParabolicMark(str(m["base"]), Section.parse(m["section"]), as_rational(m["weight"]))
                for m in doc.get("marks", [])
            )
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed surface document: {exc}") from exc
        return cls(genus, degree, marks)


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise UsageError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError as exc:
            raise UsageError(f"expected an integer, got {x!r}") from exc
    raise UsageError(f"expected an integer, got {x!r}")


def slope(m: ParabolicRuledSurface, section: Section | str) -> Fraction:
    """``S^2 + (weights of marks off S) - (weights of marks on S)``."""
    section = Section.parse(section)
    mu = Fraction(m.section_square(section))
    for mark in m.marks:
        mu += -mark.weight if mark.section is section else mark.weight
    return mu


def instability_report(m: ParabolicRuledSurface) -> dict[Section, Fraction]:
    """The zero/infinity sections whose slope is not positive.

    An empty result only means neither canonical section destabilises;
    other sections are not examined.
    """
    out = {}
    for section in (Section.ZERO, Section.INFINITY):
        mu = slope(m, section)
        if mu <= 0:
            out[section] = mu
    return out


# -- the construction ---------------------------------------------------------

@dataclass(frozen=True)
class ConstructionPoint:
    label: str
    q: int
    p: int
    n: int

    @property
    def weight(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def singularities(self) -> tuple[SingularType, SingularType]:
        """Types on the zero and on the infinity section."""
        return SingularType(self.p, self.q), SingularType(self.q - self.p, self.q)

    @property
    def chain(self) -> CurveChain:
        return blowup_chain(self.p, self.q)


@dataclass(frozen=True)
class ConstructionReport:
    genus: int
    r: int
    points: tuple[ConstructionPoint, ...]
    euler_orb: Fraction
    bundle_degree: int
    side_conditions: tuple[str, ...] = field(default=())

    @property
    def surface(self) -> ParabolicRuledSurface:
        marks = tuple(ParabolicMark(pt.label, Section.INFINITY, pt.weight) for pt in self.points)
        bundle = BundleSpec(self.r, tuple(pt.n for pt in self.points))
        return ParabolicRuledSurface(self.genus, self.bundle_degree, marks, bundle)

    @property
    def orders(self) -> list[int]:
        return [pt.q for pt in self.points]

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "r": self.r,
            "euler_orb": format_rational(self.euler_orb),
            "bundle_degree": self.bundle_degree,
            "points": [
                {
                    "label": pt.label,
                    "q": pt.q,
                    "p": pt.p,
                    "n": pt.n,
                    "weight": format_rational(pt.weight),
                    "section": Section.INFINITY.value,
                    "singularities": {
                        "zero": [pt.singularities[0].p, pt.q],
                        "infinity": [pt.singularities[1].p, pt.q],
                    },
                    "chain": pt.chain.to_dict(),
                }
                for pt in self.points
            ],
            "slopes": {s.value: format_rational(slope(self.surface, s)) for s in Section},
            "side_conditions": list(self.side_conditions),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ConstructionReport":
        try:
            points = tuple(
                ConstructionPoint(str(pt["label"]), _as_int(pt["q"]), _as_int(pt["p"]), _as_int(pt["n"]))
                for pt in doc["points"]
            )
            return cls(
                _as_int(doc["genus"]),
                _as_int(doc["r"]),
                points,
                as_rational(doc["euler_orb"]),
                _as_int(doc["bundle_degree"]),
                tuple(doc.get("side_conditions", ())),
            )
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed construction report: {exc}") from exc


def theoremB_construction(g: int, r: int, orders: Sequence[int]) -> ConstructionReport:
    """Orbifold data for genus ``g``, exponent ``r`` and orbifold orders ``q_j``.

    Raises :class:`HypothesisViolation` naming the first failed hypothesis:
    ``"genus"``, ``"r"``, ``"order"`` (q_j < 3), ``"gcd"`` (gcd(q_j, r) != 1)
    or ``"euler"`` (orbifold Euler characteristic not negative).
    """
    if g < 0:
        raise HypothesisViolation("genus", f"genus must be >= 0, got {g}")
    if r < 1:
        raise HypothesisViolation("r", f"need r >= 1, got {r}")
    orders = list(orders)
    for q in orders:
        if q < 3:
            raise HypothesisViolation("order", f"orbifold orders must be >= 3, got {q}")
    for q in orders:
        if gcd(q, r) != 1:
            raise HypothesisViolation("gcd", f"gcd({q}, {r}) = {gcd(q, r)} != 1")
    chi = euler_orb(OrbifoldRiemannSurface.with_orders(g, orders))
    if chi >= 0:
        raise HypothesisViolation("euler", f"orbifold Euler characteristic {chi} is not negative")
    points = []
    for j, q in enumerate(orders, start=1):
        p = (-r) % q
        n, rem = divmod(p + r, q)
        assert rem == 0 and 0 < p < q
        points.append(ConstructionPoint(f"A{j}", q, p, n))
    degree = r * (2 * g - 2) + sum(r - pt.n for pt in points)
    return ConstructionReport(g, r, tuple(points), chi, degree)


def realize_degree(g: int, d: int) -> ConstructionReport:
    """A construction whose line bundle has degree ``d`` (all orbifold points of order 3).

    * g = 0: r = 2 with 4 + d points;
    * g = 1: r = 2 with d points (d >= 1);
    * g >= 2: r = 1 with one point when d = 2g - 2, else r = 2 with
      d - (4g - 4) points when d >= 4g - 3.
    """
    if g < 0:
        raise UsageError(f"genus must be >= 0, got {g}")
    if d < 0:
        raise UnsupportedDegree(g, d, f"degree {d} < 0; realize {-d} and swap the two sections")
    if g == 0:
        r, s = 2, 4 + d
    elif g == 1:
        if d == 0:
            raise Degenerate("genus 1 and degree 0 would need zero orbifold points, so Euler characteristic 0")
        r, s = 2, d
    elif d == 2 * g - 2:
        r, s = 1, 1
    elif d >= 4 * g - 3:
        r, s = 2, d - (4 * g - 4)
    else:
        raise UnsupportedDegree(g, d, f"genus {g} needs degree {2 * g - 2} or >= {4 * g - 3}, got {d}")
    report = theoremB_construction(g, r, [3] * s)
    assert report.bundle_degree == d and report.euler_orb < 0
    return report
