"""Two-dimensional cones and fans over the lattice Z^2.

Orientation conventions:

* A :class:`Cone2D` ``(u, v)`` is stored with ``det(u, v) < 0``, i.e. ``v``
  is reached from ``u`` turning clockwise.  The cyclic quotient cone of
  type ``(p, q)`` is ``((0, 1), (q, -p))``.
* A :class:`Fan2D` lists its rays counterclockwise by angle, starting from
  the positive x-axis.  Its cones are the consecutive pairs spanning an
  angle strictly less than pi.

All angle comparisons are exact cross products.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, NamedTuple

from .errors import DegenerateCone, InvalidWeights, NotComplete, NotSmooth, UsageError
from .hjcf import check_fraction, hj_expand


class Vec(NamedTuple):
    x: int
    y: int

    def __add__(self, other):
        return Vec(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Vec(self.x - other[0], self.y - other[1])

    def __neg__(self):
        return Vec(-self.x, -self.y)

    def scale(self, k: int) -> "Vec":
        return Vec(k * self.x, k * self.y)


def det(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def is_primitive(v) -> bool:
    return (v[0], v[1]) != (0, 0) and gcd(v[0], v[1]) == 1


def _vec(v) -> Vec:
    if len(v) != 2:
        raise UsageError(f"lattice vectors have two coordinates, got {v!r}")
    x, y = v
    for c in (x, y):
        if isinstance(c, bool) or not isinstance(c, int):
            raise UsageError(f"lattice coordinates must be integers, got {v!r}")
    return Vec(x, y)


def _ray(v) -> Vec:
    v = _vec(v)
    if not is_primitive(v):
        raise UsageError(f"fan rays must be primitive lattice vectors, got {tuple(v)}")
    return v


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g = gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        k = a // b
        a, b = b, a - k * b
        s0, s1 = s1, s0 - k * s1
        t0, t1 = t1, t0 - k * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


# -- angular order -----------------------------------------------------------

def _half(v) -> int:
    # 0 for angles in [0, pi), 1 for [pi, 2pi)
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


class _AngleKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        ha, hb = _half(self.v), _half(other.v)
        if ha != hb:
            return ha < hb
        return det(self.v, other.v) > 0


def sort_ccw(rays: Iterable) -> list[Vec]:
    return sorted((Vec(*r) for r in rays), key=_AngleKey)


# -- cones -----------------------------------------------------------------

@dataclass(frozen=True)
class Cone2D:
    u: Vec
    v: Vec

    def __init__(self, u, v):
        u, v = _ray(u), _ray(v)
        d = det(u, v)
        if d == 0:
            raise DegenerateCone(f"rays {tuple(u)} and {tuple(v)} do not span a 2-dimensional cone")
        if d > 0:
            u, v = v, u
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def multiplicity(self) -> int:
        return abs(det(self.u, self.v))

    def contains(self, w) -> bool:
        """Closed-cone membership."""
        return det(self.u, w) <= 0 and det(w, self.v) <= 0

    def normal_form(self) -> tuple[tuple[int, int, int, int], int]:
        """Return ``(M, p)`` with ``M`` in SL(2, Z), ``M u = (0, 1)``, ``M v = (q, -p)``, ``0 <= p < q``.

        ``M`` is given row-major as ``(m11, m12, m21, m22)``.
        """
        u, v = self.u, self.v
        q = self.multiplicity
        _, s, t = _ext_gcd(u.x, u.y)
        # rows (u.y, -u.x) and (s, t); det = u.y*t + u.x*s = 1
        m = [u.y, -u.x, s, t]
        second = s * v.x + t * v.y
        # shear (x, y) -> (x, y + k x) keeps u at (0, 1) and moves v's y-coordinate by k q
        p = (-second) % q
        k = (-p - second) // q
        m[2] += k * m[0]
        m[3] += k * m[1]
        return (m[0], m[1], m[2], m[3]), p

    def to_dict(self) -> dict:
        return {"u": list(self.u), "v": list(self.v)}


@dataclass(frozen=True)
class CyclicGroupSpec:
    """The cyclic group of order q acting with weights (1, p)."""

    p: int
    q: int

    def __post_init__(self):
        check_fraction(self.p, self.q)


@dataclass(frozen=True)
class Smooth:
    def to_dict(self):
        return {"smooth": True}

    def __str__(self):
        return "smooth"


@dataclass(frozen=True)
class SingularType:
    p: int
    q: int

    def to_dict(self):
        return {"smooth": False, "p": self.p, "q": self.q}

    def __str__(self):
        return f"A_{{{self.p},{self.q}}}"


def singularity_cone(spec: CyclicGroupSpec | tuple[int, int]) -> Cone2D:
    if not isinstance(spec, CyclicGroupSpec):
        spec = CyclicGroupSpec(*spec)
    return Cone2D((0, 1), (spec.q, -spec.p))


def classify_cone(c: Cone2D) -> Smooth | SingularType:
    if c.multiplicity == 1:
        return Smooth()
    _, p = c.normal_form()
    return SingularType(p, c.multiplicity)


def _apply_inverse(m, w) -> Vec:
    # inverse of an SL(2, Z) matrix (a, b, c, d) is (d, -b, -c, a)
    a, b, c, d = m
    return Vec(d * w[0] - b * w[1], -c * w[0] + a * w[1])


def resolve_cone(c: Cone2D) -> list[Vec]:
    """Rays inserted by the minimal resolution, ordered from ``c.u`` to ``c.v``.

    Continued-fraction fast path: in normal form the rays obey
    ``w[i-1] + w[i+1] = e_i w[i]`` starting from ``(0, 1), (1, 0)``.
    """
    q = c.multiplicity
    if q == 1:
        return []
    m, p = c.normal_form()
    prev, cur = Vec(0, 1), Vec(1, 0)
    out = []
    for e in hj_expand(p, q):
        out.append(cur)
        prev, cur = cur, cur.scale(e) - prev
    assert cur == (q, -p)
    return [_apply_inverse(m, w) for w in out]


def hull_resolve_cone(c: Cone2D) -> list[Vec]:
    """Lattice points on the compact boundary of conv(c ∩ Z^2 minus 0), from u to v.

    Brute force: enumerate the lattice points of the triangle (0, u, v) and
    gift-wrap the boundary chain facing the origin, keeping collinear points.
    Independent of the continued-fraction path.
    """
    u, v = c.u, c.v
    xs = (0, u.x, v.x)
    ys = (0, u.y, v.y)
    edge = v - u
    pts = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            w = Vec(x, y)
            if w == (0, 0) or not c.contains(w):
                continue
            if det(edge, w - u) <= 0:  # on the origin side of segment uv, or on it
                pts.append(w)
    chain = []
    cur = u
    while cur != v:
        cands = [w for w in pts if det(cur, w) < 0]
        best = cands[0]
        for w in cands[1:]:
            turn = det(best - cur, w - cur)
            if turn < 0:
                best = w
            elif turn == 0:
                d_w, d_b = w - cur, best - cur
                if d_w.x * d_w.x + d_w.y * d_w.y < d_b.x * d_b.x + d_b.y * d_b.y:
                    best = w
        if best != v:
            chain.append(best)
        cur = best
    return chain


# -- fans ------------------------------------------------------------------

@dataclass(frozen=True)
class Fan2D:
    rays: tuple[Vec, ...]

    def __init__(self, rays: Iterable):
        rays = [_ray(r) for r in rays]
        if not rays:
            raise UsageError("a fan needs at least one ray")
        if len(set(rays)) != len(rays):
            raise UsageError("fan rays must be pairwise distinct")
        object.__setattr__(self, "rays", tuple(sort_ccw(rays)))

    @property
    def complete(self) -> bool:
        n = len(self.rays)
        return n >= 3 and all(det(self.rays[i], self.rays[(i + 1) % n]) > 0 for i in range(n))

    def cones(self) -> list[Cone2D]:
        """Cones between angularly consecutive rays (each stored clockwise)."""
        n = len(self.rays)
        if n < 2:
            return []
        pairs = [(self.rays[i], self.rays[(i + 1) % n]) for i in range(n)]
        return [Cone2D(b, a) for a, b in pairs if det(a, b) > 0]

    def is_smooth(self) -> bool:
        return all(c.multiplicity == 1 for c in self.cones())

    def to_dict(self) -> dict:
        return {"rays": [list(r) for r in self.rays], "complete": self.complete}

    @classmethod
    def from_dict(cls, doc: dict) -> "Fan2D":
        if not isinstance(doc, dict) or "rays" not in doc:
            raise UsageError('fan document must be an object with a "rays" list')
        fan = cls(_int_pair(r) for r in doc["rays"])
        claimed = doc.get("complete")
        if claimed is not None and bool(claimed) != fan.complete:
            raise NotComplete(
                f"fan document says complete={claimed} but its rays give complete={fan.complete}"
            )
        return fan


def _int_pair(r) -> tuple[int, int]:
    if not isinstance(r, (list, tuple)) or len(r) != 2:
        raise UsageError(f"ray must be a pair [x, y], got {r!r}")
    out = []
    for c in r:
        if isinstance(c, str):
            try:
                c = int(c)
            except ValueError as exc:
                raise UsageError(f"bad integer {c!r}") from exc
        if isinstance(c, bool) or not isinstance(c, int):
            raise UsageError(f"ray coordinates must be integers, got {r!r}")
        out.append(c)
    return out[0], out[1]


def wps_fan(a: int, b: int, c: int) -> Fan2D:
    """Fan of the weighted projective plane with weights (a, b, c).

    Rays ``v0, v1, v2`` with ``a v0 + b v1 + c v2 = 0``.  Take ``v2 = (0, 1)``,
    ``v1 = (a, y1)`` and ``v0 = (-b, y0)``; when ``a = 1`` this is
    ``v1 = (1, 0)``, ``v0 = (-b, -c)``.
    """
    for w in (a, b, c):
        if isinstance(w, bool) or not isinstance(w, int) or w < 1:
            raise InvalidWeights(f"weights must be positive integers, got {(a, b, c)}")
    if gcd(a, b) != 1 or gcd(b, c) != 1 or gcd(a, c) != 1:
        raise InvalidWeights(f"weights must be pairwise coprime, got {(a, b, c)}")
    return Fan2D(wps_rays(a, b, c))


def wps_rays(a: int, b: int, c: int) -> tuple[Vec, Vec, Vec]:
    # a*y0 + b*y1 + c = 0  with  0 <= y1 < a
    y1 = (-c * pow(b, -1, a)) % a if a > 1 else 0
    y0 = -(c + b * y1) // a
    return Vec(-b, y0), Vec(a, y1), Vec(0, 1)


def resolve_fan(f: Fan2D) -> Fan2D:
    new = list(f.rays)
    for cone in f.cones():
        new.extend(resolve_cone(cone))
    return Fan2D(new)


def added_rays(original: Fan2D, resolved: Fan2D) -> list[Vec]:
    old = set(original.rays)
    return [r for r in resolved.rays if r not in old]


def self_intersections(f: Fan2D) -> dict[Vec, int]:
    """Self-intersection of each invariant curve: ``-c`` where ``v[i-1] + v[i+1] = c v[i]``."""
    if not f.complete:
        raise NotComplete("self-intersections need a complete fan")
    if not f.is_smooth():
        raise NotSmooth("self-intersections need a smooth fan; resolve it first")
    rays = f.rays
    n = len(rays)
    out = {}
    for i, r in enumerate(rays):
        s = rays[i - 1] + rays[(i + 1) % n]
        # r is primitive, so s is an integer multiple of it
        c = s.x // r.x if r.x else s.y // r.y
        assert r.scale(c) == s
        out[r] = -c
    return out
