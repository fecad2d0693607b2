"""Exact toolkit for Hirzebruch-Jung resolutions, fiber blow-up chains,
parabolic ruled surfaces and Kähler classes on the resulting blow-ups."""

from .chains import (AtIntersection, Curve, CurveChain, OnCurve, blowdown_step, blowup_chain,
                     blowup_step, contract_to_minimal)
from .exact import Rational, SymPoly, parse_sympoly, sym, sympoly_eval
from .hjcf import hj_evaluate, hj_expand
from .kahler import (CurveConfig, IntersectionMatrix, KahlerSolution, assemble_Q, builtin_example,
                     endpoint_integrals, fiber_configuration, fiber_volumes, solve_class,
                     volume_partition_check)
from .surface import (OrbifoldRiemannSurface, ParabolicMark, ParabolicRuledSurface, Section,
                      euler_orb, instability_report, realize_degree, slope, theoremB_construction)
from .toric import (Cone2D, CyclicGroupSpec, Fan2D, Vec, classify_cone, hull_resolve_cone,
                    resolve_cone, resolve_fan, self_intersections, singularity_cone, wps_fan)

__version__ = "0.1.0"
