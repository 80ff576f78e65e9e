"""Classification of a scroll into generic, case-a, case-b or unresolved."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..curvelab import PlaneQuartic
from .double import double_curve_partners, double_curve_plane_count
from .frame import QuadricForm6
from .lines import build_line_map, contains_veronese_numeric
from .octic import FitError, fit_scroll, multiplicity_along_curve
from .special import build_trisecant_scroll, detect_veronese_containment, singular_curve_case_b
from .triple import triple_locus_scan

GENERIC, CASE_A, CASE_B, UNRESOLVED = "generic", "case-a", "case-b", "unresolved"
DENSE_TRIPLE_THRESHOLD = 16   # far above 8 isolated points: the concurrency locus is a curve
CHECK_LINES = 10


def sig(x, digits: int = 3):
    """Round to a few significant digits so reports are stable byte for byte."""
    if x is None:
        return None
    x = float(x)
    if not np.isfinite(x):
        return str(x)
    return float(f"{x:.{digits - 1}e}")


def _null(reason, **extra):
    return {"value": None, "reason": reason, **extra}


@dataclass
class AnalysisReport:
    classification: str
    classification_reason: str
    scroll_degree: dict
    double_curve_degree: dict
    triple_count: dict
    multiplicity_profile: dict
    tests: dict
    tolerances: dict
    seeds: dict
    residual_summary: dict
    artifacts: dict = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "classification_reason": self.classification_reason,
            "scroll_degree": self.scroll_degree,
            "double_curve_degree": self.double_curve_degree,
            "triple_count": self.triple_count,
            "multiplicity_profile": self.multiplicity_profile,
            "tests": self.tests,
            "tolerances": self.tolerances,
            "seeds": self.seeds,
            "residual_summary": self.residual_summary,
        }


def _config(config):
    if config is None:
        from ..cli import RunConfig
        config = RunConfig()
    return config


def _tolerances(cfg):
    return {"nullspace": cfg.tol_nullspace, "cluster": cfg.tol_cluster,
            "residual": cfg.tol_residual, "multiplicity": 1e-6}


def _degree_from_lines(F, rng, n=CHECK_LINES):
    counts = []
    for _ in range(n):
        a = rng.normal(size=4) + 1j * rng.normal(size=4)
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        counts.append(len(F.line_roots(a, b)))
    return counts


def _scroll_degree(F, counts, n_lines, per_line):
    entry = {"value": counts[0] if len(set(counts)) == 1 else None, "reason": None,
             "nullity": F.nullity, "line_root_counts": counts,
             "validation_residual": sig(F.validation_residual),
             "construction_residual": sig(F.construction_residual),
             "samples": {"lines": n_lines, "points_per_line": per_line,
                         "validation_points": 100},
             "tolerance": F.tolerance}
    if entry["value"] is None:
        entry["reason"] = "root counts on random lines disagree"
    return entry


def _fit_failure(err: FitError, cfg, seeds, tests):
    reason = f"scroll fit failed: {err}"
    sd = _null(reason, nullity=err.nullity,
               diagnostic_nullities={str(k): v for k, v in err.diagnostics.items()},
               tolerance=cfg.tol_nullspace)
    na = "not computed: no scroll equation"
    return AnalysisReport(UNRESOLVED, reason, sd, _null(na), _null(na), _null(na), tests,
                          _tolerances(cfg), seeds, {})


def _profile_entry(m, curve, n):
    return {"value": m.profile, "reason": None, "curve": curve, "samples": n,
            "max_order_checked": m.order, "tolerance": m.tolerance,
            "worst_residual_by_order": {str(k): sig(v) for k, v in sorted(m.table.items())}}


# ----------------------------------------------------------------------------
# scrolls given by a quadric through the bicanonical curve

def classify_scroll(Q: QuadricForm6, f: PlaneQuartic, config=None) -> AnalysisReport:
    cfg = _config(config)
    seed = cfg.seed
    rng = np.random.default_rng(seed)
    seeds = {"seed": seed, "ruling_swap": cfg.ruling_swap}
    tests = {}
    if Q.exact is not None:
        veronese = detect_veronese_containment(Q)
        tests["veronese_containment"] = {"value": veronese, "method": "exact pullback"}
    else:
        veronese = contains_veronese_numeric(Q, seed)
        tests["veronese_containment"] = {"value": veronese, "method": "numeric pullback"}
    lm = build_line_map(Q, f, cfg.samples, seed, cfg.ruling_swap)
    tests["ruling_convention"] = lm.convention
    n_fit = min(cfg.lines, len(lm))
    val = lm.lines(range(n_fit, len(lm))) or None
    try:
        F = fit_scroll(lm.lines(range(n_fit)), cfg.pts_per_line, seed, cfg.tol_nullspace,
                       validation_lines=val)
    except FitError as err:
        return _fit_failure(err, cfg, seeds, tests)
    sd = _scroll_degree(F, _degree_from_lines(F, rng), n_fit, cfg.pts_per_line)
    residuals = {k: sig(v) for k, v in sorted(lm.residuals.items())}
    residuals["octic_validation"] = sig(F.validation_residual)
    artifacts = {"octic": F, "line_map": lm}
    if veronese:
        report = _case_b(lm, F, cfg, sd, tests, seeds, residuals)
    else:
        report = _generic(lm, F, cfg, rng, sd, tests, seeds, residuals)
    report.artifacts = artifacts
    return report


def _case_b(lm, F, cfg, sd, tests, seeds, residuals):
    cubic = singular_curve_case_b(lm, 30, cfg.seed, cfg.tol_nullspace, cfg.tol_cluster)
    n = len(cubic.samples)
    consistent = len(set(cubic.plane_counts)) == 1 and cubic.nullity > 0
    dd = {"value": cubic.plane_counts[0] if consistent else None,
          "reason": None if consistent else "no consistent plane count for the singular curve",
          "curve": "singular curve cut out by fitted quadrics", "plane_counts": cubic.plane_counts,
          "quadric_nullity": cubic.nullity, "samples": n, "tolerance": cfg.tol_cluster}
    tc = _null("singular curve has multiplicity above 3 everywhere; isolated triple points "
               "are not defined")
    if n:
        m = multiplicity_along_curve(F, cubic.samples, 4)
        mp = _profile_entry(m, "singular curve (partner clusters)", n)
    else:
        mp = _null("no singular samples")
    tests["partner_clusters_per_line"] = sorted({tuple(c) for c in cubic.clusters_per_line})
    tests["quadric_nullity"] = cubic.nullity
    tests["bisecant_counts"] = cubic.bisecant_counts
    residuals["quadric_fit"] = sig(cubic.fit_residual)
    ok = (cubic.nullity == 3 and cubic.bisecant_counts and all(c == 2 for c in cubic.bisecant_counts)
          and mp.get("value") == 4 and dd["value"] == 3)
    if ok:
        cls, why = CASE_B, ("quadric contains the Veronese surface; singular curve is a twisted "
                            "cubic (3 quadrics, degree 3, lines bisecant) of multiplicity 4")
    else:
        cls, why = UNRESOLVED, ("quadric contains the Veronese surface but the twisted-cubic "
                                f"checks failed (quadric nullity {cubic.nullity}, profile "
                                f"{mp.get('value')}, bisecant counts {cubic.bisecant_counts})")
    return AnalysisReport(cls, why, sd, dd, tc, mp, tests, _tolerances(cfg), seeds, residuals)


def _generic(lm, F, cfg, rng, sd, tests, seeds, residuals):
    seed = cfg.seed
    counts, pcs = [], []
    for k in range(3):
        r = double_curve_plane_count(lm, seed=seed + k, tol_cluster=cfg.tol_cluster,
                                     tol_nullspace=cfg.tol_nullspace, tol_residual=cfg.tol_residual)
        counts.append(r.count)
        pcs.append(r)
    consistent = len(set(counts)) == 1 and counts[0] is not None
    dd = {"value": counts[0] if consistent else None,
          "reason": None if consistent else "plane counts disagree",
          "curve": "double curve", "plane_counts": counts,
          "anomalies": sorted({a for r in pcs for a in r.anomalies}),
          "samples": {"section_points": 100}, "tolerance": cfg.tol_cluster,
          "method": "plane-section nodes lifted to line pairs", "meeting_points": "numeric"}
    residuals["double_curve_bilinear"] = sig(max(r.residuals.get("bilinear", 0) for r in pcs))
    # double-curve samples: meeting points of partner lines
    samples, flagged = [], 0
    for x in lm.points[:12]:
        ps = double_curve_partners(lm, x, rng)
        if ps.tangency:
            flagged += 1
            continue
        samples += ps.points
    m = multiplicity_along_curve(F, samples, 2)
    mp = _profile_entry(m, "double curve (partner meeting points)", len(samples))
    tests["partner_tangency_flags"] = flagged
    scan = triple_locus_scan(lm, F, cfg.sweep, seed, cfg.tol_cluster, cfg.tol_residual)
    worst2 = max((c.second_order_residual for c in scan.clusters), default=None)
    tc = {"value": scan.count, "reason": None, "sweep_count": scan.sweep_count,
          "homotopy_count": scan.homotopy_count, "windows": len(scan.windows),
          "unresolved_windows": len(scan.unresolved),
          "near_coincident_pairs": len(scan.near_coincident),
          "tracking_restarts": scan.tracking_restarts, "resolution": scan.resolution,
          "second_order_residual_max": sig(worst2), "tolerance": scan.tolerance,
          "method": "loop sweep united with second-partial homotopy"}
    residuals["triple_second_order"] = sig(worst2)
    dense = (scan.homotopy_count or 0) > DENSE_TRIPLE_THRESHOLD
    tests["triple_locus_dense"] = dense
    if dense:
        tc["value"] = None
        tc["reason"] = "concurrency points do not stay isolated (triple curve)"
        pts = [c.point for c in scan.clusters]
        m3 = multiplicity_along_curve(F, pts, 3)
        mp = _profile_entry(m3, "concurrency locus (homotopy clusters)", len(pts))
        if m3.profile == 3:
            return AnalysisReport(CASE_A, "concurrency locus is a curve of multiplicity 3",
                                  sd, dd, tc, mp, tests, _tolerances(cfg), seeds, residuals)
        return AnalysisReport(UNRESOLVED, "dense concurrency locus without multiplicity 3",
                              sd, dd, tc, mp, tests, _tolerances(cfg), seeds, residuals)
    if mp["value"] == 2:
        return AnalysisReport(GENERIC, "no Veronese containment, isolated triple points, double "
                              "curve of multiplicity 2", sd, dd, tc, mp, tests,
                              _tolerances(cfg), seeds, residuals)
    return AnalysisReport(UNRESOLVED, f"double-curve multiplicity profile {mp['value']}, "
                          "expected 2", sd, dd, tc, mp, tests, _tolerances(cfg), seeds, residuals)


# ----------------------------------------------------------------------------
# the scroll of trisecants of Gamma for a net of quadrics

def classify_net(net, config=None) -> AnalysisReport:
    from ..netlab import (DEGENERATE, discriminant_quartic, gamma_plane_section_count,
                          gamma_samples, points_of_gamma_on_line)
    cfg = _config(config)
    seed = cfg.seed
    rng = np.random.default_rng(seed)
    seeds = {"seed": seed}
    discriminant_quartic(net, seed)
    tests = {"net_status": net.status, "net_reason": net.reason}
    if net.status == DEGENERATE:
        na = f"degenerate net: {net.reason}"
        return AnalysisReport(UNRESOLVED, na, _null(na), _null(na), _null(na), _null(na), tests,
                              _tolerances(cfg), seeds, {})
    n_points = max(1, -(-cfg.lines // 3))
    gamma = gamma_samples(net, max(cfg.samples, n_points + 4 + 25 + 40), seed)
    ts = build_trisecant_scroll(gamma, n_points, 4, seed)
    tests["trisecants_per_point"] = sorted(set(ts.counts))
    tests["trisecant_degenerations"] = ts.degenerate
    try:
        F = fit_scroll(ts.spanning(), cfg.pts_per_line, seed, cfg.tol_nullspace,
                       validation_lines=ts.spanning("validation"))
    except FitError as err:
        return _fit_failure(err, cfg, seeds, tests)
    sd = _scroll_degree(F, _degree_from_lines(F, rng), len(ts.lines), cfg.pts_per_line)
    counts = []
    for k in range(3):
        counts.append(gamma_plane_section_count(net, seed=seed + k,
                                                tol_cluster=cfg.tol_cluster).count)
    consistent = len(set(counts)) == 1
    dd = {"value": counts[0] if consistent else None,
          "reason": None if consistent else "plane counts of Gamma disagree",
          "curve": "Gamma (singular points of the net's quadrics)", "plane_counts": counts,
          "method": "exact elimination", "tolerance": cfg.tol_cluster}
    tc = _null("singular curve is a curve of triple points; isolated triple points are not "
               "defined")
    check = gamma.points[-25:]
    m = multiplicity_along_curve(F, check, 3)
    mp = _profile_entry(m, "Gamma", len(check))
    contacts = []
    for t in ts.validation[:CHECK_LINES]:
        contacts.append(len(points_of_gamma_on_line(net, *t.spanning, rng,
                                                    cfg.tol_residual, cfg.tol_cluster)[1]))
    tests["contacts_per_line"] = contacts
    residuals = {"gamma_kernel": sig(float(np.max(gamma.residuals))),
                 "trisecant_contact": sig(max(t.contact_residual for t in ts.lines)),
                 "trisecant_plucker": sig(max(t.plucker_residual for t in ts.lines)),
                 "octic_validation": sig(F.validation_residual)}
    ok = (not ts.degenerate and m.profile == 3 and contacts and all(c == 3 for c in contacts))
    if ok:
        cls, why = CASE_A, ("scroll of trisecants of Gamma; Gamma has multiplicity 3 and every "
                            "checked line meets it three times")
    else:
        cls, why = UNRESOLVED, (f"trisecant scroll checks failed (profile {m.profile}, contacts "
                                f"{contacts}, degenerations {len(ts.degenerate)})")
    report = AnalysisReport(cls, why, sd, dd, tc, mp, tests, _tolerances(cfg), seeds, residuals)
    report.artifacts = {"octic": F, "gamma": gamma, "trisecants": ts}
    return report
