"""Chains of rational curves produced by iterated blow-ups of a fiber.

A chain is a path of curves: consecutive curves meet once, others are
disjoint.  The chain attached to a weight ``p/q`` has self-intersections

    -e1, ..., -ek, -1, -e'l, ..., -e'1

where ``[e1..ek]`` expands ``p/q`` and ``[e'1..e'l]`` expands ``(q-p)/q``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

from .errors import BadLocus, LastCurve, NotMinusOne, UsageError
from .hjcf import check_fraction, hj_expand


@dataclass(frozen=True)
class Curve:
    label: str
    self_int: int

    def to_dict(self):
        return {"label": self.label, "self_int": self.self_int}


@dataclass(frozen=True)
class CurveChain:
    nodes: tuple[Curve, ...]
    marker: Optional[int] = 0

    def __post_init__(self):
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if not nodes:
            raise UsageError("a chain has at least one curve")
        if self.marker is not None and not 0 <= self.marker < len(nodes):
            raise UsageError(f"marker {self.marker} outside chain of length {len(nodes)}")

    @classmethod
    def from_self_ints(cls, self_ints: Sequence[int], labels: Sequence[str] | None = None,
                       marker: Optional[int] = 0) -> "CurveChain":
        if labels is None:
            labels = ["F"] + [f"E{i}" for i in range(1, len(self_ints))]
        return cls(tuple(Curve(l, s) for l, s in zip(labels, self_ints, strict=True)), marker)

    @property
    def self_ints(self) -> list[int]:
        return [c.self_int for c in self.nodes]

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.nodes]

    def __len__(self):
        return len(self.nodes)

    def reversed(self) -> "CurveChain":
        n = len(self.nodes)
        marker = None if self.marker is None else n - 1 - self.marker
        return CurveChain(self.nodes[::-1], marker)

    def to_dict(self) -> dict:
        return {"chain": [c.to_dict() for c in self.nodes], "marker": self.marker}

    @classmethod
    def from_dict(cls, doc: dict) -> "CurveChain":
        try:
            nodes = tuple(Curve(str(n["label"]), int(n["self_int"])) for n in doc["chain"])
            marker = doc.get("marker", 0)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed chain document: {exc}") from exc
        return cls(nodes, None if marker is None else int(marker))


@dataclass(frozen=True)
class OnCurve:
    """Blow up a general point of an end curve."""
    index: int


@dataclass(frozen=True)
class AtIntersection:
    """Blow up the point where curves ``left`` and ``left + 1`` meet."""
    left: int


Locus = Union[OnCurve, AtIntersection]


def _fresh_label(chain: CurveChain) -> str:
    used = set(chain.labels)
    i = 1
    while f"E{i}" in used:
        i += 1
    return f"E{i}"


def blowup_step(c: CurveChain, locus: Locus, label: str | None = None) -> CurveChain:
    nodes = list(c.nodes)
    n = len(nodes)
    new = Curve(label or _fresh_label(c), -1)
    marker = c.marker
    if isinstance(locus, OnCurve):
        i = locus.index
        if not 0 <= i < n:
            raise BadLocus(f"no curve {i} in a chain of length {n}")
        if n > 1 and i not in (0, n - 1):
            raise BadLocus(f"curve {i} is interior; blowing up a point on it leaves the path shape")
        nodes[i] = replace(nodes[i], self_int=nodes[i].self_int - 1)
        if i == n - 1:
            nodes.append(new)
        else:
            nodes.insert(0, new)
            if marker is not None:
                marker += 1
    elif isinstance(locus, AtIntersection):
        i = locus.left
        if not 0 <= i < n - 1:
            raise BadLocus(f"curves {i} and {i + 1} do not meet in a chain of length {n}")
        nodes[i] = replace(nodes[i], self_int=nodes[i].self_int - 1)
        nodes[i + 1] = replace(nodes[i + 1], self_int=nodes[i + 1].self_int - 1)
        nodes.insert(i + 1, new)
        if marker is not None and marker > i:
            marker += 1
    else:
        raise BadLocus(f"unknown locus {locus!r}")
    return CurveChain(tuple(nodes), marker)


def blowdown_step(c: CurveChain, i: int) -> CurveChain:
    """Contract the (-1)-curve at position ``i``; its neighbours gain +1."""
    n = len(c.nodes)
    if not 0 <= i < n:
        raise BadLocus(f"no curve {i} in a chain of length {n}")
    if c.nodes[i].self_int != -1:
        raise NotMinusOne(f"curve {c.nodes[i].label} has self-intersection {c.nodes[i].self_int}")
    if n == 1:
        raise LastCurve("cannot contract the only curve of a chain")
    nodes = list(c.nodes)
    for j in (i - 1, i + 1):
        if 0 <= j < n:
            nodes[j] = replace(nodes[j], self_int=nodes[j].self_int + 1)
    del nodes[i]
    marker = c.marker
    if marker is not None:
        if marker == i:
            marker = None
        elif marker > i:
            marker -= 1
    return CurveChain(tuple(nodes), marker)


def contract_to_minimal(c: CurveChain) -> tuple[CurveChain, int]:
    count = 0
    while len(c.nodes) > 1:
        for i, node in enumerate(c.nodes):
            if node.self_int == -1:
                break
        else:
            break
        c = blowdown_step(c, i)
        count += 1
    return c, count


def _construction_loci(target: Sequence[int]) -> list[Locus]:
    """Blow-up loci turning ``[0]`` into ``target`` with the fiber kept at index 0.

    Found backwards: contract the (-1)-curve that is not the fiber, recording
    where it sat.
    """
    cur = list(target)
    loci = []
    while len(cur) > 1:
        idx = [i for i in range(1, len(cur)) if cur[i] == -1]
        if not idx:
            raise UsageError(f"chain {list(target)} does not contract onto the fiber")
        i = idx[0]
        if i == len(cur) - 1:
            loci.append(OnCurve(i - 1))
            cur[i - 1] += 1
        else:
            loci.append(AtIntersection(i - 1))
            cur[i - 1] += 1
            cur[i + 1] += 1
        del cur[i]
    if cur != [0]:
        raise UsageError(f"chain {list(target)} does not contract to a single 0-curve")
    return loci[::-1]


def blowup_chain(p: int, q: int) -> CurveChain:
    """The fiber chain for weight ``p/q``; the fiber's proper transform ``F`` is at index 0.

    Exceptional curves are labelled ``E1, E2, ...`` in the order they are
    created by the blow-up sequence.
    """
    check_fraction(p, q)
    target = [-e for e in hj_expand(p, q)] + [-1] + [-e for e in reversed(hj_expand(q - p, q))]
    chain = CurveChain((Curve("F", 0),), 0)
    for k, locus in enumerate(_construction_loci(target), start=1):
        chain = blowup_step(chain, locus, label=f"E{k}")
    assert chain.self_ints == target
    return chain


def blowup_sequence(p: int, q: int) -> list[Locus]:
    """The loci used by :func:`blowup_chain`, in order."""
    chain = blowup_chain(p, q)
    return _construction_loci(chain.self_ints)
