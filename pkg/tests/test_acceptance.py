"""End-to-end acceptance checks.

Each check prints one ``PASS``/``FAIL`` line with its runtime; run with
``pytest tests/test_acceptance.py -s`` to see them.
"""
import json
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F
from math import gcd

import pytest
import sympy

from hjtoric.chains import CurveChain, blowup_chain, contract_to_minimal
from hjtoric.cli import execute, jsonable, parse_command
from hjtoric.errors import Degenerate, SingularMatrix, UnsupportedDegree
from hjtoric.exact import SymPoly, parse_sympoly, sym
from hjtoric.hjcf import hj_evaluate, hj_expand
from hjtoric.kahler import CurveConfig, assemble_Q, mat_vec, solve_class
from hjtoric.surface import Section, realize_degree, slope, theoremB_construction
from hjtoric.toric import det, hull_resolve_cone, resolve_cone, singularity_cone


@contextmanager
def criterion(number, title, limit=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = limit is None or elapsed < limit
        status = "PASS" if ok and within else "FAIL"
        bound = f" (limit {limit:g} s)" if limit is not None else ""
        print(f"\n[{status}] criterion {number}: {title}: {elapsed:.3f} s{bound}")
    assert within, f"criterion {number} took {elapsed:.3f} s, limit {limit} s"


def example_doc(name):
    doc, _ = execute(parse_command(["example", name, "--format", "json"]))
    return json.loads(json.dumps(jsonable(doc)))


def coprime_pairs(qmax):
    return [(p, q) for q in range(2, qmax + 1) for p in range(1, q) if gcd(p, q) == 1]


def test_criterion_1_cp2_class():
    with criterion(1, "CP2 Kahler class", limit=1.0):
        doc = example_doc("cp2")
        coeffs = {k: parse_sympoly(v) for k, v in doc["solution"]["coefficients"].items()}
        expected = {
            "H": "3*a + eps2*(a3 + 2*a2 + a1)",
            "E3": "6*a + eps2*(3*a3 + 4*a2 + 2*a1)",
            "E2": "4*a + eps2*(2*a3 + 2*a2 + a1)",
            "E1": "2*a + eps2*(a3 + a2)",
        }
        assert coeffs == {k: parse_sympoly(v) for k, v in expected.items()}
        assert doc["solution"]["residual_zero"] is True


def test_criterion_2_cp1t2():
    with criterion(2, "CP1 x T2 chain, evaluations and construction", limit=1.0):
        doc = example_doc("cp1t2")
        assert [n["self_int"] for n in doc["chain"]["chain"]] == [-2, -2, -1, -3]
        ev = {k: parse_sympoly(v) for k, v in doc["evaluations"].items()}
        pi, a, b = sym("pi", "a", "b")
        assert ev["S0"] == pi * b * F(2, 3)
        assert ev["E3"] == (b - a) * pi / 3
        c = doc["construction"]
        (pt,) = c["points"]
        assert (c["genus"], c["r"], pt["q"], pt["p"]) == (1, 1, 3, 2)
        assert c["bundle_degree"] == 0 and F(c["euler_orb"]) == F(-2, 3)


def test_criterion_3_wps123():
    with criterion(3, "weighted projective plane P(1,2,3)", limit=1.0):
        doc = example_doc("wps123")
        assert {tuple(r) for r in doc["fan"]["rays"]} == {(1, 0), (0, 1), (-2, -3)}
        assert {tuple(r) for r in doc["added"]} == {(-1, -1), (-1, -2), (0, -1)}
        types = {k: (v["type"]["smooth"], v["type"].get("p"), v["type"].get("q"))
                 for k, v in doc["classification"].items()}
        assert types["v0,v2"] == (False, 1, 2)
        assert types["v0,v1"] == (False, 2, 3)
        assert types["v1,v2"][0] is True
        assert [n["self_int"] for n in doc["subchain"]] == [-2, -1, -2, -2]
        n = len(doc["resolved"]["rays"])
        assert n == 6 and doc["selfint_sum"] == 12 - 3 * n == -6


def test_criterion_4_hj_suite():
    with criterion(4, "continued fractions and blow-up chains", limit=10.0):
        for p, q in coprime_pairs(200):
            digits = hj_expand(p, q)
            assert min(digits) >= 2
            assert hj_evaluate(digits) == (p, q)
        for p, q in coprime_pairs(60):
            k, l = len(hj_expand(p, q)), len(hj_expand(q - p, q))
            c = blowup_chain(p, q)
            minimal, n = contract_to_minimal(c)
            assert minimal.self_ints == [0] and n == k + l
            dual = blowup_chain(q - p, q)
            assert dual.self_ints == c.self_ints[::-1]
            assert len(dual) == len(c)


def test_criterion_5_resolution_oracle():
    with criterion(5, "resolution against convex hull", limit=30.0):
        for p, q in coprime_pairs(100):
            c = singularity_cone((p, q))
            fast = resolve_cone(c)
            assert fast == hull_resolve_cone(c), (p, q)
            ccw = [c.v] + fast[::-1] + [c.u]
            assert all(det(x, y) == 1 for x, y in zip(ccw, ccw[1:])), (p, q)


def _independent_degree(g, r, orders):
    total = -r * (2 - 2 * g)
    for q in orders:
        p = next(x for x in range(1, q) if (x + r) % q == 0)
        total += r - (p + r) // q
    return total


def test_criterion_6_instability_identity():
    rng = random.Random(2024)
    with criterion(6, "slope of the infinity section equals r chi_orb"):
        done = 0
        while done < 100:
            g, r = rng.randint(0, 3), rng.randint(1, 7)
            allowed = [q for q in range(3, 12) if gcd(q, r) == 1]
            orders = [rng.choice(allowed) for _ in range(rng.randint(0, 6))]
            chi = 2 - 2 * g - sum((1 - F(1, q) for q in orders), F(0))
            if chi >= 0:
                continue
            rep = theoremB_construction(g, r, orders)
            assert rep.euler_orb == chi
            assert slope(rep.surface, Section.INFINITY) == r * chi
            assert rep.bundle_degree == _independent_degree(g, r, orders)
            done += 1


def test_criterion_7_degree_realization():
    cases = ([(0, d) for d in range(0, 11)] + [(1, d) for d in range(1, 11)]
             + [(2, d) for d in [2, *range(5, 11)]] + [(3, d) for d in [4, *range(9, 13)]])
    with criterion(7, "degree realization"):
        for g, d in cases:
            rep = realize_degree(g, d)
            assert rep.bundle_degree == d and rep.euler_orb < 0, (g, d)
        with pytest.raises(UnsupportedDegree):
            realize_degree(2, 3)
        with pytest.raises(Degenerate):
            realize_degree(1, 0)


def _random_chain_config(rng):
    p_q = rng.choice(coprime_pairs(25))
    chain = blowup_chain(*p_q)
    n = len(chain)
    # a random contiguous piece of the chain, optionally with a section attached
    i = rng.randrange(n)
    j = rng.randrange(i, n)
    piece = CurveChain(chain.nodes[i:j + 1], None)
    config = CurveConfig.from_chain(piece)
    if rng.random() < 0.6:
        end = rng.choice([piece.nodes[0].label, piece.nodes[-1].label])
        config = config.attach("S0", rng.randint(-4, 1), [end])
    return config


def test_criterion_8_solver_soundness():
    rng = random.Random(99)
    names = ["a", "b", "pi", "eps2"]
    singular_seen = regular_seen = 0
    with criterion(8, "exact residual and singularity detection"):
        for _ in range(100):
            config = _random_chain_config(rng)
            Q = assemble_Q(config)
            I = {}
            for label in Q.basis:
                v = SymPoly.const(F(rng.randint(-5, 5), rng.randint(1, 4)))
                for s in rng.sample(names, rng.randint(1, 3)):
                    v = v + sym(s) * F(rng.randint(-6, 6), rng.randint(1, 3))
                I[label] = v
            oracle = sympy.Matrix(Q.rows()).det()
            if oracle == 0:
                singular_seen += 1
                with pytest.raises(SingularMatrix):
                    solve_class(Q, I)
            else:
                regular_seen += 1
                sol = solve_class(Q, I)
                assert sol.det == oracle
                residual = mat_vec(Q, sol.coefficients)
                assert all((residual[l] - I[l]).is_zero() for l in Q.basis)
        assert singular_seen and regular_seen
