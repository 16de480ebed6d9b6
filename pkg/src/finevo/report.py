"""JSON report assembly and its text rendering.

The JSON object is the single data path; the text output is a rendering of
the same dict, so the two formats cannot drift. All rationals are exact
strings in lowest terms, transformations use the ``[2,3,4,1,5]`` literal
syntax and point tuples use ``(2,4,5)``.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone

from . import __version__
from .analysis import Analysis
from .cliques import invariant_law
from .measure import RationalMeasure, coordinate_marginal
from .transform import Transformation, tuple_literal


def element_literal(x) -> str:
    if isinstance(x, Transformation):
        return x.literal()
    if isinstance(x, tuple):
        return tuple_literal(x)
    return str(x)


def measure_json(measure: RationalMeasure) -> dict:
    return {element_literal(x): str(w) for x, w in measure.items()}


def build_report(analysis: Analysis, *, seed=None, timestamp: bool = True) -> dict:
    """The full structural report for one analyzed law."""
    rd = analysis.rd
    limits = analysis.limits
    cd = analysis.cliques

    canonical_Lambda_W = RationalMeasure.uniform(cd.W)
    lam = invariant_law(limits, cd, canonical_Lambda_W)
    marginal = coordinate_marginal(lam, 1)

    sample = list(cd.W_mu)[: min(3, len(cd.W_mu))]
    projections = []
    for x in sample:
        l, g, w = cd.project_index(x)
        projections.append(
            {
                "x": list(x),
                "L": l.literal(),
                "G": g.literal(),
                "W": list(w),
            }
        )

    report = {
        "tool": {"name": "finevo", "version": __version__},
        "input": analysis.law.to_dict(),
        "semigroup": {
            "size": len(analysis.semigroup),
            "kernel_size": len(analysis.kernel),
            "m_mu": analysis.m_mu,
            "elements": [f.literal() for f in analysis.semigroup],
            "kernel": [f.literal() for f in analysis.kernel],
        },
        "rees": {
            "e": rd.e.literal(),
            "L": [f.literal() for f in rd.L],
            "G": [f.literal() for f in rd.G],
            "R": [f.literal() for f in rd.R],
            "group_order": len(rd.G),
        },
        "limits": {
            "p": limits.p,
            "eta_L": measure_json(limits.eta_L),
            "eta_R": measure_json(limits.eta_R),
            "H": [f.literal() for f in rd.H],
            "gamma": rd.gamma.literal(),
            "eta": measure_json(limits.eta),
            "nu": measure_json(limits.nu),
            "H_equals_G": set(rd.H) == set(rd.G),
            "eta_equals_nu": limits.eta == limits.nu,
        },
        "cliques": {
            "m_mu": cd.m_mu,
            "f_cliques": [list(c) for c in cd.f_cliques],
            "W_mu_size": len(cd.W_mu),
            "W": [list(w) for w in cd.W],
            "example_projections": projections,
        },
        "invariant_law": {
            "Lambda_W": measure_json(canonical_Lambda_W),
            "first_coordinate_marginal": [
                str(marginal[x]) for x in range(1, analysis.law.n + 1)
            ],
        },
    }
    if seed is not None:
        report["seed"] = seed
    if timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2)


def _is_scalar_list(value) -> bool:
    return isinstance(value, list) and all(
        not isinstance(v, (dict, list)) for v in value
    )


def _render_value(value, indent: int, lines: list) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        for key, sub in value.items():
            if _is_scalar_list(sub):
                lines.append(f"{pad}{key}: [{', '.join(str(v) for v in sub)}]")
            elif isinstance(sub, (dict, list)):
                lines.append(f"{pad}{key}:")
                _render_value(sub, indent + 1, lines)
            else:
                lines.append(f"{pad}{key}: {sub}")
    elif isinstance(value, list):
        for sub in value:
            if _is_scalar_list(sub):
                lines.append(f"{pad}- [{', '.join(str(v) for v in sub)}]")
            elif isinstance(sub, (dict, list)):
                lines.append(f"{pad}-")
                _render_value(sub, indent + 1, lines)
            else:
                lines.append(f"{pad}- {sub}")
    else:
        lines.append(f"{pad}{value}")


def render_text(report: dict) -> str:
    """Human-readable rendering of the JSON report (same data, no drift)."""
    lines = []
    _render_value(report, 0, lines)
    return "\n".join(lines)
