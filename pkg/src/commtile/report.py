"""Analysis/verification reports: canonical dicts, JSON, and text rendering.

Every rational appears as an exact "p/q" string together with a decimal
rendering; construction order is fixed so serialization is byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .constraints import ConstraintSet
from .intlinalg import Subgroup
from .lp import DualVector, GammaResult
from .tiler import Analysis, TilingResult
from .verifier import VerificationReport


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def frac_json(x: Fraction) -> dict:
    return {"exact": frac_str(x), "decimal": float(x)}


def subgroup_json(s: Subgroup) -> dict:
    return {"rank": s.rank, "basis": [list(c) for c in s.generators()]}


def dual_json(y: DualVector) -> dict:
    return {
        "support": [
            {**subgroup_json(s), "value": frac_json(v)} for s, v in y.entries
        ]
    }


def constraints_json(cs: ConstraintSet) -> dict:
    return {
        "method": cs.method.value,
        "completeness": cs.completeness.value,
        "count": len(cs),
        "subgroups": [subgroup_json(s) for s in cs.subgroups],
    }


def gamma_json(g: GammaResult) -> dict:
    return {
        "value": g.gamma,
        "lower": g.lower,
        "upper": g.upper,
        "log_tolerance": g.log_tolerance,
        "s": [frac_json(v) for v in g.s],
        "memory_split": [frac_json(v) for v in g.split()],
    }


def tiling_json(t: TilingResult) -> dict:
    return {
        "memory": t.requested_memory,
        "effective_memory": t.spec.memory,
        "point_count": t.spec.point_count(),
        "counts": t.spec.counts(),
        "t1": [{"direction": list(v), "step": step} for v, step in t.t1],
        "t2": [list(v) for v in t.t2],
        "t3": [list(v) for v in t.t3],
        "t3_count": len(t.t3),
    }


def verification_json(v: VerificationReport) -> dict:
    out = {
        "tile_point_count": v.tile_point_count,
        "image_counts": list(v.image_counts) if v.image_counts is not None else None,
        "cover_ok": v.cover_ok,
        "cover_window": v.cover_window,
        "exponent_fits": {
            name: {"slope": slope, "residual": residual}
            for name, (slope, residual) in sorted(v.exponent_fits.items())
        },
        "exact_optimality": None,
        "hbl_bound_ok": v.hbl_bound_ok,
        "notices": list(v.notices),
        "all_ok": v.all_ok(),
    }
    if v.exact_optimality is not None:
        out["exact_optimality"] = [
            {
                "memory": e.memory,
                "tile_points": e.tile_points,
                "image_counts": list(e.image_counts),
                "memory_sum": e.memory_sum,
                "memory_ok": e.memory_ok,
                "ratio": e.ratio,
            }
            for e in v.exact_optimality
        ]
    return out


def analysis_report(
    analysis: Analysis,
    tiling: TilingResult | None = None,
    verification: VerificationReport | None = None,
) -> dict:
    """The full report dict: schema keys s_hbl, primal, dual, constraints,
    tile, translations, verification, warnings."""
    names = analysis.problem.map_names()
    primal = {
        "status": analysis.primal.status,
        "objective": frac_json(analysis.primal.objective),
        "s": {n: frac_json(v) for n, v in zip(names, analysis.primal.s)},
    }
    dual = dual_json(analysis.dual)
    dual["value"] = frac_json(analysis.s_hbl)
    flag = [subgroup_json(u) for u in analysis.flag.chain]
    flag_values = [
        {**subgroup_json(s), "value": frac_json(v)} for s, v in analysis.flag_dual.entries
    ]
    groups = [
        {
            "elements": [list(c) for c in g.generators()],
            "scaling": frac_json(s),
        }
        for g, s in zip(analysis.decomposition.groups, analysis.decomposition.scalings)
    ]
    tile = {
        "path": analysis.path,
        "scalings": [frac_json(s) for s in analysis.tile_scalings()],
        "groups": groups,
        "flag": flag,
        "flag_dual": flag_values,
        "gamma": gamma_json(analysis.gamma) if analysis.gamma is not None else None,
    }
    report = {
        "s_hbl": frac_json(analysis.s_hbl),
        "primal": primal,
        "dual": dual,
        "constraints": constraints_json(analysis.constraints),
        "tile": tile,
        "translations": tiling_json(tiling) if tiling is not None else None,
        "verification": verification_json(verification) if verification is not None else None,
        "warnings": list(analysis.warnings),
    }
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def report_to_text(report: dict) -> str:
    """Short human-readable rendering of the report dict."""
    lines = []
    s = report["s_hbl"]
    lines.append(f"communication exponent s_HBL = {s['exact']} ({s['decimal']})")
    cs = report["constraints"]
    lines.append(
        f"constraints: {cs['count']} subgroups via {cs['method']} [{cs['completeness']}]"
    )
    primal = report["primal"]
    svals = ", ".join(f"{n}={v['exact']}" for n, v in primal["s"].items())
    lines.append(f"primal exponents: {svals}")
    dual = report["dual"]
    for entry in dual["support"]:
        basis = "; ".join(",".join(str(x) for x in col) for col in entry["basis"])
        lines.append(f"dual y = {entry['value']['exact']} on rank-{entry['rank']} <{basis}>")
    tile = report["tile"]
    scalings = ", ".join(v["exact"] for v in tile["scalings"])
    lines.append(f"tiling path: {tile['path']}")
    lines.append(f"tile scalings per element: {scalings}")
    if tile["gamma"] is not None:
        g = tile["gamma"]
        split = ", ".join(v["exact"] for v in g["memory_split"])
        lines.append(f"gamma = {g['value']:.9g} in [{g['lower']:.9g}, {g['upper']:.9g}]")
        lines.append(f"memory split c_i: {split}")
    tr = report["translations"]
    if tr is not None:
        lines.append(
            f"tile at M={tr['memory']}: {tr['point_count']} points, "
            f"{len(tr['t1'])} scaled directions, {len(tr['t2'])} free directions, "
            f"{tr['t3_count']} coset representatives"
        )
    ver = report["verification"]
    if ver is not None:
        lines.append(f"verification: {'ok' if ver['all_ok'] else 'FAILED'}")
        if ver["image_counts"] is not None:
            lines.append(f"  image counts: {ver['image_counts']}")
        if ver["cover_ok"] is not None:
            lines.append(f"  exact cover on window R={ver['cover_window']}: {ver['cover_ok']}")
        for name, fit in ver["exponent_fits"].items():
            lines.append(f"  fitted exponent {name}: {fit['slope']:.4f} (residual {fit['residual']:.2e})")
        if ver["exact_optimality"]:
            for e in ver["exact_optimality"]:
                lines.append(
                    f"  M={e['memory']}: |S|={e['tile_points']} sum|phi(S)|={e['memory_sum']}"
                    f" <=M: {e['memory_ok']} ratio={e['ratio']:.6f}"
                )
        for note in ver["notices"]:
            lines.append(f"  note: {note}")
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"
