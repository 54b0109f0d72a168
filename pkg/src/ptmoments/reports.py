"""Report assembly (plain dicts ready for ``json.dumps``) and text rendering.

Every numeric quantity that is compared against something is emitted as a
record carrying the criterion name, the threshold and the comparison.
"""

from __future__ import annotations

import json
from typing import Optional

from . import __version__
from .bipartite import BipartiteState, moments
from .errors import PremiseError
from .criteria import (SLACK, Verdict, classify, eigenvalue_bounds, exact_ppt,
                       mixture_p2_bound, mixture_ppt_condition, moment_sandwich)
from .keyrate import KeyRateReport
from .states import mixture, pptes_family, sep_family
from .witness import (WitnessOperator, expectation, locate_sign_change,
                      mixing_threshold, mixture_expectation_closed_form,
                      mixture_threshold_closed_form, pe_expectation_closed_form,
                      pe_threshold_closed_form, witness_w)

REPORT_SCHEMA_VERSION = "1.0"


def _envelope(kind: str, seed=None) -> dict:
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "report": kind,
        "tool": {"name": "ptmoments", "version": __version__},
        "seed": seed,
    }


def _record(criterion: str, value: float, threshold, relation: str, **extra) -> dict:
    rec = {"criterion": criterion, "value": float(value),
           "threshold": None if threshold is None else float(threshold), "relation": relation}
    rec.update(extra)
    return rec


def verdict_dict(v: Verdict) -> dict:
    return {
        "kind": v.kind.value,
        "evidence": [
            {"criterion": e.criterion, "value": float(e.value), "threshold": float(e.threshold),
             "relation": e.relation, "fired": bool(e.fired), "note": e.note}
            for e in v.evidence
        ],
    }


def _input_section(state: BipartiteState, path: Optional[str]) -> dict:
    return {"path": path, "label": state.label, "d1": state.d1, "d2": state.d2}


def moments_section(state: BipartiteState) -> dict:
    mom = moments(state)
    sandwich = moment_sandwich(state)
    return {
        "p2": _record("p2_dimension_threshold", mom.p2, mom.dim_threshold, "<=",
                      satisfied=bool(mom.p2 <= mom.dim_threshold + SLACK)),
        "p3": _record("moment_sandwich", mom.p3, None, "",
                      note="enters the window 2*sqrt(p3)-1 <= p2 <= sqrt(p3)"),
        "sandwich": {
            "criterion": "moment_sandwich",
            "lower": _record("p2_lower_bound", mom.lower_bound, mom.p2, "<="),
            "upper": _record("p2_upper_bound", mom.upper_bound, mom.p2, ">="),
            "holds": bool(sandwich.holds),
        },
        "dim_threshold": mom.dim_threshold,
    }


def eigenvalue_bounds_section(state: BipartiteState) -> dict:
    b = eigenvalue_bounds(state.pt)
    return {
        "criterion": "pt_min_eigenvalue_bounds",
        "m": b.m,
        "s": b.s,
        "lower": _record("pt_min_eigenvalue_lower_bound", b.lower, 0.0, ">=",
                         certifies_ppt=bool(b.lower >= -SLACK)),
        "upper": _record("pt_min_eigenvalue_upper_bound", b.upper, 0.0, "<",
                         certifies_npt=bool(b.upper < -SLACK)),
    }


def oracle_section(state: BipartiteState, psd_tol: float) -> dict:
    check = exact_ppt(state, psd_tol)
    return _record("pt_spectrum", check.min_pt_eigenvalue, -psd_tol, ">=",
                   is_ppt=bool(check.is_ppt),
                   pt_eigenvalues=[float(x) for x in state.pt_spectrum.eigenvalues])


def witness_section(w: WitnessOperator, state: BipartiteState) -> dict:
    val = expectation(w, state)
    return {
        "label": w.label,
        "expectation": _record("witness_expectation", val, -SLACK, "<", detects=bool(val < -SLACK)),
    }


def analysis_report(state: BipartiteState, *, path: Optional[str] = None,
                    w: Optional[WitnessOperator] = None, tolerances: Optional[dict] = None,
                    seed=None) -> dict:
    tolerances = dict(tolerances or {})
    psd_tol = tolerances.get("psd_tol", 1e-10)
    rep = _envelope("analysis", seed)
    rep["input"] = _input_section(state, path)
    rep["tolerances"] = tolerances
    rep["moments"] = moments_section(state)
    rep["eigenvalue_bounds"] = eigenvalue_bounds_section(state)
    rep["oracle"] = oracle_section(state, psd_tol)
    rep["verdict"] = verdict_dict(classify(state, w, psd_tol))
    if w is not None:
        rep["witness"] = witness_section(w, state)
    return rep


def moments_report(state: BipartiteState, orders, *, path: Optional[str] = None, seed=None) -> dict:
    orders = sorted({int(k) for k in orders})
    mom = moments(state, orders)
    rep = _envelope("moments", seed)
    rep["input"] = _input_section(state, path)
    rep["moments"] = {str(k): mom.moment(k) if k in (2, 3) else mom.extra[k] for k in orders}
    rep["thresholds"] = {
        "dim_threshold": _record("p2_dimension_threshold", mom.p2, mom.dim_threshold, "<="),
        "lower_bound": _record("p2_lower_bound", mom.lower_bound, mom.p2, "<="),
        "upper_bound": _record("p2_upper_bound", mom.upper_bound, mom.p2, ">="),
    }
    return rep


def keyrate_report(rep_kr: KeyRateReport, source: dict) -> dict:
    rep = _envelope("key_rate")
    rep["input"] = source
    rep["key_rate"] = {
        "x": rep_kr.x, "y": rep_kr.y, "z": rep_kr.z, "w": rep_kr.w, "Q": rep_kr.Q,
        "K_D": _record("key_rate_positive", rep_kr.K_D, 0.0, ">", positive=bool(rep_kr.K_D > 0)),
        "exceeds_one": rep_kr.exceeds_one,
        "note": rep_kr.note,
    }
    return rep


SCAN_COLUMNS = ("p", "expectation", "closed_form", "legacy_closed_form", "p2_bound",
                "dim_threshold", "ppt_condition", "oracle_ppt", "detected")


def mixture_scan(a: float = 2.5, x: float = 4.0, alpha: float = 1.0, p_steps: int = 20) -> dict:
    """Tabulate the witness expectation and PPT tests along p*sep(a) + (1-p)*pptes(x).

    ``p`` runs over ``p_steps + 1`` equally spaced points in [0, 1].  The two
    closed-form columns are only defined on the a = 2.5, alpha = 1 slice.
    """
    if p_steps < 1:
        raise ValueError("p_steps must be at least 1")
    sep, ent = sep_family(a), pptes_family(x)
    w = witness_w(alpha)
    on_slice = a == 2.5 and alpha == 1.0
    p2_sep, p2_ent = moments(sep).p2, moments(ent).p2
    d1, d2 = sep.dims
    rows = []
    for i in range(p_steps + 1):
        p = i / p_steps
        rho = mixture(p, sep, ent)
        val = expectation(w, rho)
        rows.append({
            "p": p,
            "expectation": val,
            "closed_form": mixture_expectation_closed_form(p, x) if on_slice else None,
            "legacy_closed_form": pe_expectation_closed_form(p, x) if on_slice else None,
            "p2_bound": mixture_p2_bound(p, p2_sep, p2_ent),
            "dim_threshold": 1.0 / (d1 * d2 - 1),
            "ppt_condition": mixture_ppt_condition(p, p2_sep, p2_ent, d1, d2),
            "oracle_ppt": bool(exact_ppt(rho).is_ppt),
            "detected": bool(val < -SLACK),
        })
    crossing = locate_sign_change(w, sep, ent)
    try:
        thr = mixing_threshold(w, sep, ent)
        threshold = {"k1": thr.k1, "k2": thr.k2, "value": thr.threshold}
    except PremiseError as exc:  # e.g. x <= 3: the witness never fires
        threshold = {"error": str(exc)}
    rep = _envelope("mixture_scan")
    rep["params"] = {"a": a, "x": x, "alpha": alpha, "p_steps": p_steps}
    rep["witness"] = w.label
    rep["rows"] = rows
    rep["sign_change"] = {
        "measured": crossing,
        "threshold_from_k": threshold,
        "closed_form": mixture_threshold_closed_form(x) if on_slice and x > 3 else None,
        "legacy_closed_form": pe_threshold_closed_form(x) if on_slice and x > 3 else None,
    }
    return rep


# ---------------------------------------------------------------------------
# Rendering.

def to_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=True) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def render_analysis_text(rep: dict) -> str:
    inp = rep["input"]
    mom = rep["moments"]
    lines = [
        f"state      {inp['label'] or inp['path'] or '-'}  ({inp['d1']}x{inp['d2']})",
        f"p2         {_fmt(mom['p2']['value'])}   threshold 1/(d1d2-1) = {_fmt(mom['p2']['threshold'])}",
        f"p3         {_fmt(mom['p3']['value'])}",
        f"window     {_fmt(mom['sandwich']['lower']['value'])} <= p2 <= "
        f"{_fmt(mom['sandwich']['upper']['value'])}   holds: {_fmt(mom['sandwich']['holds'])}",
    ]
    eb = rep["eigenvalue_bounds"]
    lines.append(f"lambda_min bounds  [{_fmt(eb['lower']['value'])}, {_fmt(eb['upper']['value'])}]")
    orc = rep["oracle"]
    lines.append(f"min PT eigenvalue  {_fmt(orc['value'])}   PPT: {_fmt(orc['is_ppt'])}")
    if "witness" in rep:
        wv = rep["witness"]["expectation"]
        lines.append(f"witness    {rep['witness']['label']}  Tr(W rho) = {_fmt(wv['value'])}")
    lines.append(f"verdict    {rep['verdict']['kind']}")
    for e in rep["verdict"]["evidence"]:
        mark = "*" if e["fired"] else " "
        note = f"  ({e['note']})" if e["note"] else ""
        lines.append(f"  {mark} {e['criterion']}: {_fmt(e['value'])} {e['relation']} {_fmt(e['threshold'])}{note}")
    return "\n".join(lines) + "\n"


def render_moments_text(rep: dict) -> str:
    lines = [f"state  {rep['input']['label'] or rep['input']['path'] or '-'}"]
    lines += [f"p{k}  {_fmt(v)}" for k, v in rep["moments"].items()]
    return "\n".join(lines) + "\n"


def render_keyrate_text(rep: dict) -> str:
    kr = rep["key_rate"]
    lines = [f"{k:<4} {_fmt(kr[k])}" for k in ("x", "y", "z", "w", "Q")]
    lines.append(f"K_D  {_fmt(kr['K_D']['value'])}")
    if kr["note"]:
        lines.append(f"note: {kr['note']}")
    return "\n".join(lines) + "\n"


def render_scan_delimited(rep: dict, delimiter: str = ",") -> str:
    out = [delimiter.join(SCAN_COLUMNS)]
    for row in rep["rows"]:
        out.append(delimiter.join(_fmt(row[c]) if not isinstance(row[c], float) else repr(row[c])
                                  for c in SCAN_COLUMNS))
    return "\n".join(out) + "\n"


def render_scan_text(rep: dict) -> str:
    body = render_scan_delimited(rep, "\t")
    sc = rep["sign_change"]
    tail = [
        f"sign change (bisection)      {_fmt(sc['measured'])}",
        f"k2/(k1+k2)                   {_fmt(sc['threshold_from_k'].get('value'))}",
        f"closed form 14(x-3)/(...)    {_fmt(sc['closed_form'])}",
        f"legacy closed form           {_fmt(sc['legacy_closed_form'])}",
    ]
    return body + "\n".join(tail) + "\n"

