"""Report builders behind the command-line driver.

Each function returns ``(report, exit_code)`` where the exit code is 0 on
success and 1 when a mathematical condition fails (the report then carries
the certificate).  Resource and validation problems propagate as exceptions.
"""

from __future__ import annotations

from .action import (
    FittingLadder,
    check_UU,
    check_WUU,
    restrict_to_chart,
)
from .blowup import blowup_chart_set
from .errors import ConditionFailure
from .graded import affine_chart, max_weight_and_x0min
from .instance import Instance, restrict_to_stratum_closure
from .quotient import affine_quotient_report, chart_quotient, uhat_quotient_report
from .strata import stratify


def _locus_json(loc, m):
    out = {
        "m": m,
        "w_max": loc.w_max,
        "nonempty": loc.nonempty,
        "charts": [c.name for c in loc.charts],
        "max_weight_piece": [str(f) for f in loc.piece],
        "nilpotent_sections": [str(f) for f in loc.nilpotent],
        "covers_whole_cone": loc.covers,
    }
    if not loc.covers:
        out["note"] = "X0_min is a proper open subset: the maximal-weight charts miss part of Proj"
    return out


def _charts(inst: Instance):
    """(charts with their derivations, nonemptiness json or None)."""
    alg = inst.algebra
    if alg.mode == "affine":
        c = affine_chart(alg)
        return [(c, inst.D)], None
    m = inst.limits["m"]
    loc = max_weight_and_x0min(alg, m)
    info = _locus_json(loc, m)
    return [(c, restrict_to_chart(inst.D, c)) for c in loc.charts], info


def _uu_over_charts(pairs):
    per = []
    ks = set()
    holds = True
    for chart, Dc in pairs:
        res, _ = check_UU(Dc)
        per.append(dict(res.to_json(), chart=chart.name))
        if not res.holds:
            holds = False
        elif res.k is not None:
            ks.add(res.k)
    if len(ks) > 1:
        holds = False
    k = next(iter(ks)) if holds and ks else None
    return {"holds": holds, "k": k, "charts": per}


def check_report(inst: Instance):
    pairs, info = _charts(inst)
    report = {"kind": "check", "mode": inst.mode}
    if info is not None:
        report["nonemptiness"] = info
        if not info["nonempty"]:
            report["nonemptiness"]["reason"] = "every maximal-weight section is nilpotent"
            report["uu"] = None
            report["wuu"] = None
            return report, 1
    uu = _uu_over_charts(pairs)
    report["uu"] = uu
    wuu = check_WUU(inst.D, inst.limits["m"], inst.limits["pool_degree"])
    report["wuu"] = wuu.to_json()
    return report, 0 if (uu["holds"] or wuu.holds) else 1


def stratify_report(inst: Instance):
    ladder = FittingLadder(inst.D)
    strata = stratify(inst.D, ladder)
    return {
        "kind": "strata",
        "r": inst.D.r,
        "strata": [s.to_json() for s in strata],
    }, 0


def quotient_report(inst: Instance, seed=0):
    try:
        if inst.mode == "affine":
            return affine_quotient_report(inst.D, seed), 0
        return uhat_quotient_report(inst.D, inst.limits["m"], seed, inst.k_stable), 0
    except ConditionFailure as exc:
        return {"kind": "failure", "reason": str(exc), "certificate": exc.certificate}, 1


def _blowup_all(inst: Instance, seed=0, quotients=True):
    pairs, info = _charts(inst)
    report = {"kind": "blowup"}
    if info is not None:
        report["nonemptiness"] = info
        if not info["nonempty"]:
            return dict(report, reason="X0_min is empty"), 1
    wuu = check_WUU(inst.D, inst.limits["m"], inst.limits["pool_degree"])
    report["wuu"] = wuu.to_json()
    if not wuu.holds:
        return report, 1
    k = wuu.k
    charts = []
    for chart, Dc in pairs:
        entry = {"chart": chart.name}
        try:
            centre, bcs, certs = blowup_chart_set(Dc, k, inst.limits["pool_degree"], chart, chart.name)
        except ConditionFailure as exc:
            entry["status"] = "no_witness"
            entry["reason"] = str(exc)
            charts.append(entry)
            continue
        entry["status"] = "blown_up"
        entry["centre"] = centre.to_json()
        entry["blowup_charts"] = []
        for bc, cert in zip(bcs, certs):
            item = dict(bc.to_json(), uu_certificate=cert.to_json())
            if quotients:
                cq = chart_quotient(affine_chart(bc.algebra), bc.lifted, seed)
                item["quotient"] = {
                    "k": cq.k,
                    "slices": cq.slices.to_json(),
                    "invariants": cq.invariants.to_json(),
                }
            entry["blowup_charts"].append(item)
        charts.append(entry)
    report["k"] = k
    report["charts"] = charts
    return report, 0


def blowup_report(inst: Instance, seed=0):
    return _blowup_all(inst, seed)


def pipeline_report(inst: Instance, seed=0, depth=0):
    """Non-emptiness, then UU (quotient), then WUU (blow-up), then strata."""
    pairs, info = _charts(inst)
    if info is not None and not info["nonempty"]:
        return {"kind": "pipeline", "route": "empty", "nonemptiness": info}, 1
    uu = _uu_over_charts(pairs)
    if uu["holds"]:
        return quotient_report(inst, seed)
    rep, code = _blowup_all(inst, seed)
    if code == 0:
        return {"kind": "pipeline", "route": "wuu_blowup", "uu": uu, "blowup": rep}, 0
    out = {"kind": "pipeline", "route": "strata", "uu": uu, "wuu": rep.get("wuu")}
    if depth > 0:
        out["route"] = "inconclusive"
        return out, 1
    ladder = FittingLadder(inst.D)
    strata = stratify(inst.D, ladder)
    out["strata"] = []
    worst = 0
    for s in strata:
        item = s.to_json()
        if s.empty:
            out["strata"].append(item)
            continue
        sub = restrict_to_stratum_closure(inst, s.delta)
        subrep, code = pipeline_report(sub, seed, depth + 1)
        item["closure_instance"] = sub.to_dict()
        item["result"] = subrep
        item["status"] = "ok" if code == 0 else "inconclusive"
        worst = max(worst, code)
        out["strata"].append(item)
    return out, worst
