"""Stochastic-order verifiers, the Schur-convexity tester, and theorem audits.

Each audit pairs a named ordering result's hypotheses (checked numerically on
grids) with its conclusion (checked by a curve verifier), and classifies the
outcome.  A conclusion failure with all hypotheses satisfied is re-checked at
doubled grid resolution before being reported as a potential counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import extremes as ext
from . import majorization as maj
from .errors import DomainError, EvaluationError, GridError
from .extremes import ClaimCountDistribution, ExtremeKind, Portfolio
from .severity import check_regularity

__all__ = [
    "OrderVerdict",
    "verify_st",
    "verify_rh",
    "SchurTestResult",
    "schur_test",
    "TheoremId",
    "Precondition",
    "TheoremAudit",
    "audit",
    "CONFIRMED",
    "HYP_VIOLATED_CONCLUSION_FAILS",
    "HYP_VIOLATED_CONCLUSION_HOLDS",
    "POTENTIAL_COUNTEREXAMPLE",
]

CONFIRMED = "confirmed"
HYP_VIOLATED_CONCLUSION_FAILS = "hypothesis_violated_and_conclusion_fails"
HYP_VIOLATED_CONCLUSION_HOLDS = "hypothesis_violated_but_conclusion_holds"
POTENTIAL_COUNTEREXAMPLE = "POTENTIAL_COUNTEREXAMPLE"


@dataclass(frozen=True)
class OrderVerdict:
    """Result of a stochastic-order check on a grid."""

    holds: bool
    margin: float
    grid_spec: str
    witness: Optional[Tuple[float, float, float]] = None  # (x, lhs, rhs)
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "margin": self.margin,
            "grid_spec": self.grid_spec,
            "witness": list(self.witness) if self.witness else None,
        }


def _eval_curve(curve, grid):
    vals = np.asarray(curve(grid), dtype=float)
    if vals.shape != grid.shape:
        vals = np.broadcast_to(vals, grid.shape).astype(float)
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("curve produced non-finite values on the grid")
    return vals


def _grid_spec(grid) -> str:
    return f"{grid.size} points on [{grid[0]:.6g}, {grid[-1]:.6g}]"


def _bisect_root(fn, lo, hi, width=1e-6, max_iter=200):
    flo = fn(lo)
    for _ in range(max_iter):
        if hi - lo <= width:
            break
        mid = 0.5 * (lo + hi)
        if (fn(mid) > 0) == (flo > 0):
            lo, flo = mid, fn(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def verify_st(curve_a, curve_b, grid, tol: float = 1e-9) -> OrderVerdict:
    """Verify A >=_st B: survival of A dominates survival of B on the grid.

    A crossing is confirmed only by two consecutive grid points violating
    beyond ``tol``; the witness abscissa is then refined by bisection.
    """
    grid = np.asarray(grid, dtype=float)
    a = _eval_curve(curve_a, grid)
    b = _eval_curve(curve_b, grid)
    diff = a - b
    margin = float(diff.min())
    spec = _grid_spec(grid)
    bad = diff < -tol
    confirmed = bad[:-1] & bad[1:]
    if not np.any(confirmed):
        return OrderVerdict(True, margin, spec)
    first = int(np.argmax(confirmed))
    # refine the crossing between the last non-violating point and the run
    x_w = grid[first]
    before = np.nonzero(~bad[: first + 1])[0]
    if before.size:
        j = int(before[-1])
        g = lambda x: float(np.asarray(curve_a(np.array([x])) - curve_b(np.array([x])))[0])
        x_w = _bisect_root(g, grid[j], grid[first + 1])
    lhs = float(np.asarray(curve_a(np.array([x_w])))[0])
    rhs = float(np.asarray(curve_b(np.array([x_w])))[0])
    return OrderVerdict(False, margin, spec, witness=(float(x_w), lhs, rhs))


def verify_rh(cdf_a, cdf_b, grid, tol: float = 1e-9, rh_a=None, rh_b=None) -> OrderVerdict:
    """Verify A >=_rh B via monotonicity of the CDF ratio F_A / F_B.

    The ratio characterization is numerically stabler than comparing reversed
    hazards where the CDFs are tiny; when reversed-hazard callables are given
    the pointwise comparison is attached as secondary evidence.
    """
    grid = np.asarray(grid, dtype=float)
    fa = _eval_curve(cdf_a, grid)
    fb = _eval_curve(cdf_b, grid)
    if np.any(fb <= 0.0) or np.any(fa <= 0.0):
        raise EvaluationError("CDFs must be positive on the grid interior")
    ratio = fa / fb
    steps = np.diff(ratio)
    margin = float(steps.min()) if steps.size else np.inf
    spec = _grid_spec(grid)
    evidence = {}
    if rh_a is not None and rh_b is not None:
        diffs = _eval_curve(rh_a, grid) - _eval_curve(rh_b, grid)
        evidence["pointwise_rh_min_margin"] = float(diffs.min())
    bad = steps < -tol
    confirmed = bad[:-1] & bad[1:]
    if not np.any(confirmed):
        return OrderVerdict(True, margin, spec, evidence=evidence)
    first = int(np.argmax(confirmed))
    x_w = float(grid[first + 1])
    return OrderVerdict(
        False, margin, spec,
        witness=(x_w, float(ratio[first]), float(ratio[first + 1])),
        evidence=evidence,
    )


# ---------------------------------------------------------------------------
# Schur-convexity tester


@dataclass(frozen=True)
class SchurTestResult:
    """Aggregated sign evidence of the pairwise derivative expression
    (u_i - u_j)(d phi/du_i - d phi/du_j) over a cloud of test points."""

    schur_convex: bool
    schur_concave: bool
    min_expression: float
    max_expression: float

    @property
    def classification(self) -> str:
        if self.schur_convex:
            return "schur_convex_evidence"
        if self.schur_concave:
            return "schur_concave_evidence"
        return "neither"


def schur_test(
    phi: Callable[[np.ndarray], float],
    point,
    h: Optional[float] = None,
    tol: float = 1e-7,
    n_perturb: int = 4,
    seed: int = 0,
) -> SchurTestResult:
    """Finite-difference Schur-convexity evidence at ``point`` and nearby."""
    base = np.asarray(point, dtype=float)
    if base.ndim != 1 or base.size < 2:
        raise DomainError("point must be a vector with at least two coordinates")
    rng = np.random.default_rng(seed)
    cloud = [base]
    for _ in range(n_perturb):
        pert = base * (1.0 + 0.05 * rng.standard_normal(base.size))
        cloud.append(np.abs(pert) + 1e-12)

    lo, hi = np.inf, -np.inf
    for u in cloud:
        steps = h if h is not None else 1e-5 * (1.0 + np.abs(u))
        steps = np.broadcast_to(steps, u.shape)
        grad = np.empty(u.size)
        for i in range(u.size):
            up, dn = u.copy(), u.copy()
            up[i] += steps[i]
            dn[i] -= steps[i]
            grad[i] = (phi(up) - phi(dn)) / (2.0 * steps[i])
        if not np.all(np.isfinite(grad)):
            raise EvaluationError("non-finite gradient in schur_test")
        for i in range(u.size):
            for j in range(i + 1, u.size):
                e = (u[i] - u[j]) * (grad[i] - grad[j])
                lo, hi = min(lo, e), max(hi, e)
    return SchurTestResult(lo >= -tol, hi <= tol, float(lo), float(hi))


# ---------------------------------------------------------------------------
# theorem audits


class TheoremId(Enum):
    ST_MIN_ALPHA = "ST_MIN_ALPHA"
    ST_MIN_PSI = "ST_MIN_PSI"
    ST_MIN_RANDOM = "ST_MIN_RANDOM"
    ST_MAX_FIXED = "ST_MAX_FIXED"
    ST_MAX_RANDOM = "ST_MAX_RANDOM"
    ST_MAX_KWG = "ST_MAX_KWG"
    ST_MAX_SCALE = "ST_MAX_SCALE"
    ST_MAX_PHR = "ST_MAX_PHR"
    ST_MAX_CHAIN = "ST_MAX_CHAIN"
    ST_MAX_SCALE_CHAIN = "ST_MAX_SCALE_CHAIN"
    RH_MAX_ALPHA = "RH_MAX_ALPHA"
    RH_MAX_PSI = "RH_MAX_PSI"
    RH_MAX_RANDOM = "RH_MAX_RANDOM"
    RH_MIN_ALPHA = "RH_MIN_ALPHA"
    RH_MIN_PSI = "RH_MIN_PSI"
    RH_MIN_RANDOM = "RH_MIN_RANDOM"
    RH_MIN_PRESERVE = "RH_MIN_PRESERVE"


@dataclass(frozen=True)
class Precondition:
    name: str
    satisfied: bool
    evidence: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "satisfied": self.satisfied, "evidence": self.evidence}


@dataclass(frozen=True)
class TheoremAudit:
    theorem_id: TheoremId
    preconditions: List[Precondition]
    conclusion: OrderVerdict
    classification: str

    def to_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id.value,
            "preconditions": [p.to_dict() for p in self.preconditions],
            "conclusion": self.conclusion.to_dict(),
            "classification": self.classification,
        }


_NEEDS_EQUAL_P = {TheoremId.ST_MIN_ALPHA, TheoremId.RH_MAX_ALPHA, TheoremId.RH_MIN_ALPHA}
_NEEDS_EQUAL_ALPHA = {TheoremId.ST_MIN_PSI, TheoremId.RH_MAX_PSI, TheoremId.RH_MIN_PSI}
_NEEDS_EQUAL_COUNTS = {TheoremId.RH_MAX_RANDOM, TheoremId.RH_MIN_RANDOM, TheoremId.RH_MIN_PRESERVE}
_NEEDS_COUNTS = {
    TheoremId.ST_MIN_RANDOM, TheoremId.ST_MAX_RANDOM, TheoremId.ST_MAX_KWG,
    TheoremId.ST_MAX_SCALE, TheoremId.ST_MAX_PHR, TheoremId.ST_MAX_CHAIN,
    TheoremId.ST_MAX_SCALE_CHAIN,
} | _NEEDS_EQUAL_COUNTS
_FIXED_N = {
    TheoremId.ST_MIN_ALPHA, TheoremId.ST_MIN_PSI, TheoremId.ST_MAX_FIXED,
    TheoremId.RH_MAX_ALPHA, TheoremId.RH_MAX_PSI, TheoremId.RH_MIN_ALPHA,
    TheoremId.RH_MIN_PSI,
}
_MIN_KIND = {
    TheoremId.ST_MIN_ALPHA, TheoremId.ST_MIN_PSI, TheoremId.ST_MIN_RANDOM,
    TheoremId.RH_MIN_ALPHA, TheoremId.RH_MIN_PSI, TheoremId.RH_MIN_RANDOM,
    TheoremId.RH_MIN_PRESERVE,
}
_RH_KIND = {
    TheoremId.RH_MAX_ALPHA, TheoremId.RH_MAX_PSI, TheoremId.RH_MAX_RANDOM,
    TheoremId.RH_MIN_ALPHA, TheoremId.RH_MIN_PSI, TheoremId.RH_MIN_RANDOM,
    TheoremId.RH_MIN_PRESERVE,
}


def _fmt(check) -> str:
    return f"worst margin {check.worst_margin:.3e}"


def _reg_grids(pf_a: Portfolio, pf_b: Portfolio, grid: np.ndarray):
    alphas = np.concatenate([pf_a.alpha, pf_b.alpha])
    lo, hi = 0.9 * alphas.min(), 1.1 * alphas.max()
    agrid = np.linspace(lo, hi, 13)
    xs = grid[grid > 0]
    xgrid = xs[:: max(1, xs.size // 25)]
    ps = np.concatenate([pf_a.p, pf_b.p])
    plo, phi = ps.min(), ps.max()
    if phi - plo < 1e-9:
        plo, phi = max(plo * 0.9, 1e-6), min(phi * 1.1, 1.0 - 1e-9)
    pgrid = np.linspace(plo, phi, 21)
    return agrid, xgrid, pgrid


def _counts_equal(c1: ClaimCountDistribution, c2: ClaimCountDistribution) -> bool:
    return (
        c1.support.shape == c2.support.shape
        and np.array_equal(c1.support, c2.support)
        and np.allclose(c1.weights, c2.weights, atol=1e-12)
    )


def _conclusion(
    theorem_id: TheoremId,
    pf_a: Portfolio,
    pf_b: Portfolio,
    counts_a: Optional[ClaimCountDistribution],
    counts_b: Optional[ClaimCountDistribution],
    grid: np.ndarray,
    tol: float,
) -> OrderVerdict:
    n = pf_a.n
    is_min = theorem_id in _MIN_KIND
    if theorem_id in _FIXED_N:
        if is_min:
            cdf_a = lambda x: ext.cdf_min_fixed(pf_a, n, x)
            cdf_b = lambda x: ext.cdf_min_fixed(pf_b, n, x)
            surv_a = lambda x: ext.survival_min_fixed(pf_a, n, x)
            surv_b = lambda x: ext.survival_min_fixed(pf_b, n, x)
            rh_a = lambda x: ext.reversed_hazard_min_fixed(pf_a, n, x)
            rh_b = lambda x: ext.reversed_hazard_min_fixed(pf_b, n, x)
        else:
            cdf_a = lambda x: ext.cdf_max_fixed(pf_a, n, x)
            cdf_b = lambda x: ext.cdf_max_fixed(pf_b, n, x)
            surv_a = lambda x: ext.survival_max_fixed(pf_a, n, x)
            surv_b = lambda x: ext.survival_max_fixed(pf_b, n, x)
            rh_a = lambda x: ext.reversed_hazard_max_fixed(pf_a, n, x)
            rh_b = lambda x: ext.reversed_hazard_max_fixed(pf_b, n, x)
    else:
        kind = ExtremeKind.MIN if is_min else ExtremeKind.MAX
        if is_min:
            cdf_a = lambda x: ext.cdf_min_random(pf_a, counts_a, x)
            cdf_b = lambda x: ext.cdf_min_random(pf_b, counts_b, x)
            surv_a = lambda x: ext.survival_min_random(pf_a, counts_a, x)
            surv_b = lambda x: ext.survival_min_random(pf_b, counts_b, x)
        else:
            cdf_a = lambda x: ext.cdf_max_random(pf_a, counts_a, x)
            cdf_b = lambda x: ext.cdf_max_random(pf_b, counts_b, x)
            surv_a = lambda x: ext.survival_max_random(pf_a, counts_a, x)
            surv_b = lambda x: ext.survival_max_random(pf_b, counts_b, x)
        rh_a = lambda x: ext.reversed_hazard_random(pf_a, counts_a, kind, x)
        rh_b = lambda x: ext.reversed_hazard_random(pf_b, counts_b, kind, x)

    if theorem_id in _RH_KIND:
        return verify_rh(cdf_a, cdf_b, grid, tol=tol, rh_a=rh_a, rh_b=rh_b)
    return verify_st(surv_a, surv_b, grid, tol=tol)


def _refine(grid: np.ndarray) -> np.ndarray:
    mids = 0.5 * (grid[:-1] + grid[1:])
    return np.sort(np.concatenate([grid, mids]))


def audit(
    theorem_id: TheoremId,
    portfolio_a: Portfolio,
    portfolio_b: Portfolio,
    counts_a: Optional[ClaimCountDistribution] = None,
    counts_b: Optional[ClaimCountDistribution] = None,
    grid=None,
    tol: float = 1e-9,
    reg_tol: float = 1e-9,
) -> TheoremAudit:
    """Audit one ordering theorem on a concrete instance.

    Every hypothesis of the named theorem is evaluated numerically; then the
    conclusion is checked with :func:`verify_st` or :func:`verify_rh` on the
    appropriate extreme-claim curves.
    """
    pf_a, pf_b = portfolio_a, portfolio_b
    if pf_a.n != pf_b.n:
        raise DomainError("portfolios must have equal size")
    if pf_a.family.name != pf_b.family.name:
        raise DomainError("portfolios must share one severity family")
    if theorem_id in _NEEDS_COUNTS:
        if counts_a is None or counts_b is None:
            raise DomainError(f"{theorem_id.value} requires both count distributions")
        ext._check_counts(pf_a, counts_a)
        ext._check_counts(pf_b, counts_b)
    if theorem_id in _NEEDS_EQUAL_COUNTS and not _counts_equal(counts_a, counts_b):
        raise DomainError(f"{theorem_id.value} requires identically distributed counts")
    if theorem_id in _NEEDS_EQUAL_P and not np.allclose(pf_a.p, pf_b.p, atol=1e-12):
        raise DomainError(f"{theorem_id.value} requires equal occurrence-probability vectors")
    if theorem_id in _NEEDS_EQUAL_ALPHA and not np.allclose(pf_a.alpha, pf_b.alpha, atol=1e-12):
        raise DomainError(f"{theorem_id.value} requires equal severity-parameter vectors")

    if grid is None:
        kind = ExtremeKind.MIN if theorem_id in _MIN_KIND else ExtremeKind.MAX
        cts = [counts_a or ClaimCountDistribution.degenerate(pf_a.n),
               counts_b or ClaimCountDistribution.degenerate(pf_b.n)]
        grid = ext.auto_x_grid([pf_a, pf_b], cts, kind, points=800)
    grid = np.asarray(grid, dtype=float)

    agrid, xgrid, pgrid = _reg_grids(pf_a, pf_b, grid)
    reg = check_regularity(pf_a.family, pf_a.psi, agrid, xgrid, tol=reg_tol, p_grid=pgrid)
    A, B = pf_a.param_matrix(), pf_b.param_matrix()
    pre: List[Precondition] = []

    def add(name, ok, evidence=""):
        pre.append(Precondition(name, bool(ok), evidence))

    def add_check(name, check):
        add(name, check.holds, _fmt(check))

    def add_mn():
        add("(psi(p), alpha) in M_n", maj.in_Mn(A))
        add("(psi(p*), beta) in M_n", maj.in_Mn(B))

    def add_counts_st():
        add("N_1 <=_st N_2", ext.counts_st_leq(counts_a, counts_b))

    def add_row_weak():
        rw = maj.row_weakly_majorizes(A, B)
        add("A row-weakly majorizes B",
            rw.holds, f"psi row {rw.psi_row}, alpha row {rw.alpha_row}")

    tid = theorem_id
    if tid is TheoremId.ST_MIN_ALPHA:
        add_check("survival decreasing in alpha", reg.decreasing_in_alpha)
        add_check("survival log-convex in alpha", reg.logconvex_in_alpha)
        add_mn()
        add("alpha weakly supermajorizes beta", maj.weakly_supermajorizes(pf_a.alpha, pf_b.alpha))
    elif tid is TheoremId.ST_MIN_PSI:
        add_check("psi decreasing", reg.psi_decreasing)
        add_check("psi log-convex", reg.psi_logconvex)
        add_mn()
        add("psi(p) weakly supermajorizes psi(p*)",
            maj.weakly_supermajorizes(A.row_psi, B.row_psi))
    elif tid is TheoremId.ST_MIN_RANDOM:
        add_counts_st()
        add_check("survival decreasing in alpha", reg.decreasing_in_alpha)
        add_check("survival log-convex in alpha", reg.logconvex_in_alpha)
        add_check("psi decreasing", reg.psi_decreasing)
        add_check("psi log-convex", reg.psi_logconvex)
        add_mn()
        add_row_weak()
    elif tid in (TheoremId.ST_MAX_FIXED, TheoremId.ST_MAX_RANDOM):
        if tid is TheoremId.ST_MAX_RANDOM:
            add_counts_st()
        add_check("survival decreasing in alpha", reg.decreasing_in_alpha)
        add_check("survival convex in alpha", reg.convex_in_alpha)
        add_check("psi decreasing", reg.psi_decreasing)
        add_check("psi convex", reg.psi_convex)
        add_mn()
        add_row_weak()
    elif tid in (TheoremId.ST_MAX_KWG, TheoremId.ST_MAX_SCALE, TheoremId.ST_MAX_PHR):
        wanted = {
            TheoremId.ST_MAX_KWG: "kumaraswamy_g",
            TheoremId.ST_MAX_SCALE: "scale",
            TheoremId.ST_MAX_PHR: "proportional_hazard",
        }[tid]
        add(f"family is {wanted}", pf_a.family.name == wanted)
        if tid is TheoremId.ST_MAX_SCALE:
            if hasattr(pf_a.family, "baseline"):
                dens = np.asarray(pf_a.family.baseline.pdf(xgrid), dtype=float)
                add("baseline density decreasing", bool(np.all(np.diff(dens) <= reg_tol)))
            else:
                add("baseline density decreasing", False, "family has no baseline")
        add_counts_st()
        add_check("survival decreasing in alpha", reg.decreasing_in_alpha)
        add_check("survival convex in alpha", reg.convex_in_alpha)
        add_check("psi decreasing", reg.psi_decreasing)
        add_check("psi convex", reg.psi_convex)
        add_mn()
        add_row_weak()
    elif tid in (TheoremId.ST_MAX_CHAIN, TheoremId.ST_MAX_SCALE_CHAIN):
        if tid is TheoremId.ST_MAX_SCALE_CHAIN:
            add("family is scale", pf_a.family.name == "scale")
            if hasattr(pf_a.family, "baseline"):
                dens = np.asarray(pf_a.family.baseline.pdf(xgrid), dtype=float)
                add("baseline density decreasing", bool(np.all(np.diff(dens) <= reg_tol)))
            else:
                add("baseline density decreasing", False, "family has no baseline")
        add_counts_st()
        add_check("survival decreasing in alpha", reg.decreasing_in_alpha)
        add_check("survival convex in alpha", reg.convex_in_alpha)
        add_check("psi decreasing", reg.psi_decreasing)
        add_check("psi convex", reg.psi_convex)
        add_mn()
        ds = maj.chain_majorizes_doubly_stochastic(A, B)
        add("B = A P for doubly stochastic P", ds.feasible,
            "necessary condition for a T-transform chain factorization")
    elif tid is TheoremId.RH_MAX_ALPHA:
        add_check("psi decreasing", reg.psi_decreasing)
        add_check("survival decreasing in alpha", reg.decreasing_in_alpha)
        add_check("survival log-convex in alpha", reg.logconvex_in_alpha)
        add_check("hazard decreasing in alpha", reg.hazard_decreasing_in_alpha)
        add_check("hazard convex in alpha", reg.hazard_convex_in_alpha)
        add_mn()
        add("alpha weakly supermajorizes beta", maj.weakly_supermajorizes(pf_a.alpha, pf_b.alpha))
    elif tid is TheoremId.RH_MAX_PSI:
        add_check("psi decreasing", reg.psi_decreasing)
        add_check("psi log-convex", reg.psi_logconvex)
        add_check("survival decreasing in alpha", reg.decreasing_in_alpha)
        add_check("hazard decreasing in alpha", reg.hazard_decreasing_in_alpha)
        add_mn()
        add("psi(p) weakly supermajorizes psi(p*)",
            maj.weakly_supermajorizes(A.row_psi, B.row_psi))
    elif tid is TheoremId.RH_MAX_RANDOM:
        add("alpha_n >= beta_n", pf_a.alpha[-1] >= pf_b.alpha[-1] - 1e-12)
        add("p_n <= p*_n", pf_a.p[-1] <= pf_b.p[-1] + 1e-12)
        add_check("psi decreasing", reg.psi_decreasing)
        add_check("psi log-convex", reg.psi_logconvex)
        add_check("survival decreasing in alpha", reg.decreasing_in_alpha)
        add_check("survival log-convex in alpha", reg.logconvex_in_alpha)
        add_check("hazard decreasing in alpha", reg.hazard_decreasing_in_alpha)
        add_check("hazard convex in alpha", reg.hazard_convex_in_alpha)
        add_mn()
        add_row_weak()
    elif tid is TheoremId.RH_MIN_ALPHA:
        add_check("CDF increasing in alpha (survival decreasing)", reg.decreasing_in_alpha)
        add_check("CDF log-convex in alpha", reg.logconvex_in_alpha_of_F)
        add_check("hazard convex in alpha", reg.hazard_convex_in_alpha)
        add_mn()
        add("alpha majorizes beta", maj.majorizes(pf_a.alpha, pf_b.alpha))
    elif tid is TheoremId.RH_MIN_PSI:
        add_check("psi increasing", reg.psi_increasing)
        add_check("psi log-convex", reg.psi_logconvex)
        add_mn()
        add("psi(p) majorizes psi(p*)", maj.majorizes(A.row_psi, B.row_psi))
    elif tid is TheoremId.RH_MIN_RANDOM:
        add_check("psi increasing", reg.psi_increasing)
        add_check("psi log-convex", reg.psi_logconvex)
        add_check("CDF log-convex in alpha", reg.logconvex_in_alpha_of_F)
        add_check("hazard convex in alpha", reg.hazard_convex_in_alpha)
        add_mn()
        rm = maj.row_majorizes(A, B)
        add("A row-majorizes B", rm.holds, f"psi row {rm.psi_row}, alpha row {rm.alpha_row}")
    elif tid is TheoremId.RH_MIN_PRESERVE:
        # the preservation result decomposes into two monotonicity conditions
        # in m plus the fixed-n reversed-hazard comparison
        ms = [int(m) for m in counts_a.support]
        xs = grid[grid > 0][:: max(1, grid.size // 50)]
        rh_b_curves = np.array([ext.reversed_hazard_min_fixed(pf_b, m, xs) for m in ms])
        add("reversed hazard of min increasing in m",
            bool(np.all(np.diff(rh_b_curves, axis=0) >= -tol)))
        ratios = np.array(
            [ext.cdf_min_fixed(pf_a, m, xs) / ext.cdf_min_fixed(pf_b, m, xs) for m in ms]
        )
        add("CDF ratio of min increasing in m",
            bool(np.all(np.diff(ratios, axis=0) >= -tol)))
        fixed = verify_rh(
            lambda x: ext.cdf_min_fixed(pf_a, ms[-1], x),
            lambda x: ext.cdf_min_fixed(pf_b, ms[-1], x),
            grid, tol=tol,
        )
        add("fixed-n reversed hazard order holds", fixed.holds, f"margin {fixed.margin:.3e}")
    else:  # pragma: no cover
        raise DomainError(f"unknown theorem id {theorem_id}")

    conclusion = _conclusion(tid, pf_a, pf_b, counts_a, counts_b, grid, tol)
    all_pre = all(p.satisfied for p in pre)
    if conclusion.holds:
        classification = CONFIRMED if all_pre else HYP_VIOLATED_CONCLUSION_HOLDS
    elif not all_pre:
        classification = HYP_VIOLATED_CONCLUSION_FAILS
    else:
        # re-check at doubled resolution before reporting a counterexample
        recheck = _conclusion(tid, pf_a, pf_b, counts_a, counts_b, _refine(grid), tol)
        if recheck.holds:
            conclusion = recheck
            classification = CONFIRMED
        else:
            conclusion = recheck
            classification = POTENTIAL_COUNTEREXAMPLE
    return TheoremAudit(tid, pre, conclusion, classification)
