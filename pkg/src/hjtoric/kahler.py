"""Intersection forms of curve configurations and exact Kähler class solves.

Given curves ``C_i`` with intersection matrix ``Q`` and prescribed areas
``I_i = [omega] . C_i`` (polynomials in symbols such as ``a``, ``b``,
``pi``, ``eps2``), the class ``omega = sum c_i PD(C_i)`` solves ``Q c = I``.
``I`` is linear in its monomials, so the solve runs once per monomial
with a rational right-hand side.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from .chains import CurveChain
from .errors import DimensionMismatch, SingularMatrix, UnknownLabel, UsageError
from .exact import SymPoly, as_rational, format_rational, parse_sympoly, sym
from .hjcf import check_fraction, hj_expand


@dataclass(frozen=True)
class CurveConfig:
    nodes: tuple[tuple[str, int], ...]
    edges: tuple[tuple[str, str, int], ...] = ()

    def __post_init__(self):
        nodes = tuple((str(l), int(s)) for l, s in self.nodes)
        labels = [l for l, _ in nodes]
        if len(set(labels)) != len(labels):
            raise UsageError("curve labels must be distinct")
        edges = []
        for e in self.edges:
            a, b, *mult = e
            m = int(mult[0]) if mult else 1
            if a == b:
                raise UsageError(f"self-edge on {a!r}")
            if m < 1:
                raise UsageError(f"intersection multiplicity must be >= 1, got {m}")
            for x in (a, b):
                if x not in labels:
                    raise UnknownLabel(f"edge mentions unknown curve {x!r}")
            edges.append((a, b, m))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def labels(self) -> list[str]:
        return [l for l, _ in self.nodes]

    @classmethod
    def from_chain(cls, chain: CurveChain) -> "CurveConfig":
        labels = chain.labels
        return cls(
            tuple((c.label, c.self_int) for c in chain.nodes),
            tuple((labels[i], labels[i + 1], 1) for i in range(len(labels) - 1)),
        )

    def attach(self, label: str, self_int: int, neighbours: Iterable[str]) -> "CurveConfig":
        return CurveConfig(
            ((label, self_int),) + self.nodes,
            tuple((label, n, 1) for n in neighbours) + self.edges,
        )

    def to_dict(self) -> dict:
        return {
            "nodes": [{"label": l, "self_int": s} for l, s in self.nodes],
            "edges": [[a, b] if m == 1 else [a, b, m] for a, b, m in self.edges],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CurveConfig":
        try:
            nodes = tuple((n["label"], n["self_int"]) for n in doc["nodes"])
            edges = tuple(tuple(e) for e in doc.get("edges", []))
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed configuration document: {exc}") from exc
        return cls(nodes, edges)


@dataclass(frozen=True)
class IntersectionMatrix:
    basis: tuple[str, ...]
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def assemble_Q(c: CurveConfig, basis_order: Sequence[str] | None = None) -> IntersectionMatrix:
    basis = tuple(basis_order) if basis_order is not None else tuple(c.labels)
    if sorted(basis) != sorted(c.labels):
        missing = set(basis) ^ set(c.labels)
        raise UnknownLabel(f"basis is not a permutation of the curve labels (differs on {sorted(missing)})")
    pos = {l: i for i, l in enumerate(basis)}
    n = len(basis)
    q = [[0] * n for _ in range(n)]
    for label, s in c.nodes:
        q[pos[label]][pos[label]] = s
    for a, b, m in c.edges:
        q[pos[a]][pos[b]] += m
        q[pos[b]][pos[a]] += m
    return IntersectionMatrix(basis, tuple(tuple(r) for r in q))


# -- fraction-free elimination -------------------------------------------------

def _bareiss(rows: list[list[int]], n: int) -> tuple[list[list[int]], int]:
    """Fraction-free forward elimination on an n x (n + k) integer array.

    Returns the upper-triangular array and det of the leading n x n block.
    Raises :class:`SingularMatrix` when the determinant vanishes.
    """
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                raise SingularMatrix("intersection matrix is singular (det = 0)")
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, len(a[i])):
                # exact division is guaranteed by Sylvester's identity
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return a, sign * a[n - 1][n - 1] if n else 1


def determinant(Q: IntersectionMatrix | Sequence[Sequence[int]]) -> int:
    rows = Q.rows() if isinstance(Q, IntersectionMatrix) else [list(r) for r in Q]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return 1
    try:
        return _bareiss(rows, n)[1]
    except SingularMatrix:
        return 0


def solve_rational(Q: Sequence[Sequence[int]], rhs: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], int]:
    """Solve ``Q X = B`` for an integer matrix ``Q`` and rational columns ``B``.

    ``rhs`` is a list of columns.  Returns ``(columns of X, det Q)``.
    """
    n = len(Q)
    cols = [[as_rational(x) for x in col] for col in rhs]
    for col in cols:
        if len(col) != n:
            raise DimensionMismatch(f"right-hand side of length {len(col)} for a {n} x {n} system")
    # clear denominators column by column so elimination stays in Z
    scales = []
    int_cols = []
    for col in cols:
        den = 1
        for x in col:
            den = lcm(den, x.denominator)
        scales.append(den)
        int_cols.append([int(x * den) for x in col])
    aug = [list(Q[i]) + [c[i] for c in int_cols] for i in range(n)]
    upper, d = _bareiss(aug, n)
    sols = []
    for j, den in enumerate(scales):
        x = [Fraction(0)] * n
        for i in range(n - 1, -1, -1):
            acc = Fraction(upper[i][n + j])
            for k in range(i + 1, n):
                acc -= upper[i][k] * x[k]
            x[i] = acc / upper[i][i]
        sols.append([xi / den for xi in x])
    return sols, d


@dataclass(frozen=True)
class KahlerSolution:
    basis: tuple[str, ...]
    coefficients: dict
    det: int
    residual_checked: bool = False
    side_conditions: tuple[str, ...] = field(default=())

    def __getitem__(self, label):
        return self.coefficients[label]

    def to_dict(self) -> dict:
        return {
            "basis": list(self.basis),
            "coefficients": {l: str(self.coefficients[l]) for l in self.basis},
            "det": format_rational(Fraction(self.det)),
            "residual_zero": self.residual_checked,
        }

    def class_text(self) -> str:
        return " + ".join(f"({self.coefficients[l]})*PD({l})" for l in self.basis)


def mat_vec(Q: IntersectionMatrix, values: Mapping[str, SymPoly]) -> dict[str, SymPoly]:
    out = {}
    for i, row in enumerate(Q.entries):
        acc = SymPoly()
        for j, qij in enumerate(row):
            if qij:
                acc = acc + values[Q.basis[j]] * qij
        out[Q.basis[i]] = acc
    return out


def solve_class(Q: IntersectionMatrix, I: Mapping[str, SymPoly | str] | Sequence) -> KahlerSolution:
    """Exact ``C = Q^-1 I``; the residual ``Q C - I`` is checked to vanish."""
    if isinstance(I, Mapping):
        if set(I) != set(Q.basis):
            raise UnknownLabel(
                f"volume labels {sorted(I)} do not match the basis {sorted(Q.basis)}"
            )
        vols = {l: SymPoly.coerce(I[l]) for l in Q.basis}
    else:
        I = list(I)
        if len(I) != Q.size:
            raise DimensionMismatch(f"{len(I)} volumes for {Q.size} curves")
        vols = {l: SymPoly.coerce(v) for l, v in zip(Q.basis, I)}
    monomials = sorted({m for v in vols.values() for m in v.terms})
    rhs = [[vols[l].coefficient(m) for l in Q.basis] for m in monomials]
    if not rhs:
        d = determinant(Q)
        if d == 0:
            raise SingularMatrix("intersection matrix is singular (det = 0)")
        sols = []
    else:
        sols, d = solve_rational(Q.rows(), rhs)
    coeffs = {}
    for i, l in enumerate(Q.basis):
        coeffs[l] = SymPoly({m: sols[j][i] for j, m in enumerate(monomials)})
    residual = mat_vec(Q, coeffs)
    ok = all((residual[l] - vols[l]).is_zero() for l in Q.basis)
    if not ok:  # pragma: no cover - would be a solver bug
        raise ArithmeticError("Kahler solve left a nonzero residual")
    return KahlerSolution(Q.basis, coeffs, d, residual_checked=True)


def endpoint_integrals(r: int, q: int, chi_orb) -> tuple[SymPoly, SymPoly]:
    """Areas of the zero section and of the (-1)-curve.

    ``A = -pi b chi_orb`` (orbifold Gauss-Bonnet) and
    ``B = 2 pi (b - a) / (2 r q)``.
    """
    if r < 1 or q < 2:
        raise UsageError(f"need r >= 1 and q >= 2, got r={r}, q={q}")
    pi, a, b = sym("pi", "a", "b")
    chi = as_rational(chi_orb)
    A = pi * b * (-chi)
    B = (pi * (b - a)) * Fraction(2, 2 * r * q)
    return A, B


def volume_partition_check(volumes: Sequence[SymPoly | str], total: SymPoly | str) -> bool:
    acc = SymPoly()
    for v in volumes:
        acc = acc + SymPoly.coerce(v)
    return (acc - SymPoly.coerce(total)).is_zero()


# -- the singular-fiber configuration -----------------------------------------

def fiber_configuration(p: int, q: int, s0_self_int: int | None = None) -> CurveConfig:
    """Zero section ``S0`` followed by the resolved fiber chain.

    Basis order ``S0, E1..Ek, S, E'l..E'1``; S0 meets E1.  The zero-section
    self-intersection defaults to ``-l - 1`` with ``l`` the length of the
    expansion of ``(q - p)/q``.
    """
    check_fraction(p, q)
    e = hj_expand(p, q)
    e_dual = hj_expand(q - p, q)
    k, l = len(e), len(e_dual)
    labels = [f"E{i}" for i in range(1, k + 1)] + ["S"] + [f"E'{i}" for i in range(l, 0, -1)]
    selfs = [-x for x in e] + [-1] + [-x for x in reversed(e_dual)]
    if s0_self_int is None:
        s0_self_int = -l - 1
    nodes = (("S0", s0_self_int),) + tuple(zip(labels, selfs))
    order = ["S0"] + labels
    edges = tuple((order[i], order[i + 1], 1) for i in range(len(order) - 1))
    return CurveConfig(nodes, edges)


def fiber_volumes(p: int, q: int, r: int, chi_orb) -> dict[str, SymPoly]:
    """``I = [A, eps2 a1..eps2 ak, B, eps2 a'l..eps2 a'1]`` keyed like :func:`fiber_configuration`.

    The primed areas use symbols ``ap1, ap2, ...``.
    """
    check_fraction(p, q)
    k, l = len(hj_expand(p, q)), len(hj_expand(q - p, q))
    A, B = endpoint_integrals(r, q, chi_orb)
    eps2 = sym("eps2")
    vols = {"S0": A}
    for i in range(1, k + 1):
        vols[f"E{i}"] = eps2 * sym(f"a{i}")
    vols["S"] = B
    for i in range(l, 0, -1):
        vols[f"E'{i}"] = eps2 * sym(f"ap{i}")
    return vols


# -- worked examples ---------------------------------------------------------------

def _cp2_report() -> dict:
    config = CurveConfig(
        (("H", -2), ("E3", -1), ("E2", -2), ("E1", -2)),
        (("H", "E3", 1), ("E3", "E2", 1), ("E2", "E1", 1)),
    )
    basis = ("H", "E3", "E2", "E1")
    Q = assemble_Q(config, basis)
    eps2, a, a1, a2, a3 = sym("eps2", "a", "a1", "a2", "a3")
    I = {"H": eps2 * a3, "E3": a, "E2": eps2 * a2, "E1": eps2 * a1}
    return {
        "name": "cp2",
        "chain": CurveChain.from_self_ints([-2, -1, -2, -2], ["H", "E3", "E2", "E1"], marker=None),
        "Q": Q,
        "I": I,
        "solution": solve_class(Q, I),
        "exceptional_total": eps2 * (a1 + a2 + a3),
    }


def _cp1t2_report() -> dict:
    from .chains import blowup_chain
    from .surface import theoremB_construction

    construction = theoremB_construction(1, 1, [3])
    pt = construction.points[0]
    chain = blowup_chain(pt.p, pt.q)
    A, B = endpoint_integrals(construction.r, pt.q, construction.euler_orb)
    eps2, a1, a2, a3 = sym("eps2", "a1", "a2", "a3")
    evaluations = {
        "S0": A,
        "F": eps2 * a1,
        "E1": eps2 * a2,
        "E2": eps2 * a3,
        "E3": B,
    }
    # curves named as in the worked example: E1(-2) E2(-2) E3(-1) F(-3), S0 on E1
    named = CurveChain.from_self_ints(chain.self_ints, ["E1", "E2", "E3", "F"], marker=3)
    template = fiber_configuration(pt.p, pt.q)
    s0_self_int = dict(template.nodes)["S0"]
    config = CurveConfig.from_chain(named).attach("S0", s0_self_int, ["E1"])
    basis = ("S0", "E1", "E2", "E3", "F")
    Q = assemble_Q(config, basis)
    solution = solve_class(Q, evaluations)
    return {
        "name": "cp1t2",
        "chain": named,
        "evaluations": evaluations,
        "construction": construction,
        "Q": Q,
        "solution": solution,
        "side_conditions": ("a/b < k_2",),
    }


def _wps123_report() -> dict:
    from .toric import (Cone2D, added_rays, classify_cone, resolve_fan, self_intersections,
                        wps_fan, wps_rays)

    fan = wps_fan(1, 2, 3)
    v0, v1, v2 = wps_rays(1, 2, 3)
    resolved = resolve_fan(fan)
    selfint = self_intersections(resolved)
    cones = {
        "v1,v2": Cone2D(v1, v2),
        "v0,v2": Cone2D(v0, v2),
        "v0,v1": Cone2D(v0, v1),
    }
    # rays (-1,-1), v0, (-1,-2), (0,-1) carry the curves H, E3, E2, E1
    sub = [r for r in resolved.rays if r not in (v1, v2)]
    return {
        "name": "wps123",
        "fan": fan,
        "resolved": resolved,
        "added": added_rays(fan, resolved),
        "self_intersections": selfint,
        "classification": {k: classify_cone(c) for k, c in cones.items()},
        "cones": cones,
        "subchain": [(r, selfint[r]) for r in sub],
        "subchain_labels": ("H", "E3", "E2", "E1"),
        "selfint_sum": sum(selfint.values()),
    }


_EXAMPLES = {"cp2": _cp2_report, "cp1t2": _cp1t2_report, "wps123": _wps123_report}


def builtin_example(name: str) -> dict:
    from .errors import UnknownExample

    try:
        build = _EXAMPLES[name]
    except KeyError:
        raise UnknownExample(f"unknown example {name!r}; choose from {sorted(_EXAMPLES)}") from None
    return build()


def parse_volumes(doc: Mapping) -> dict[str, SymPoly]:
    if not isinstance(doc, Mapping):
        raise UsageError("volumes document must map labels to polynomial strings")
    return {str(k): parse_sympoly(v) if isinstance(v, str) else SymPoly.coerce(v) for k, v in doc.items()}
