"""Boundedness criteria, regularity quantities, and the equivalence audit.

Every criterion produces a dyadic series of finite-resolution values and
a trend verdict in {bounded, divergent, inconclusive}.  Classification
works on the running supremum of the series: a criterion asks for a
uniform bound over all scales, so the running sup either plateaus
(bounded) or keeps setting records toward the origin (divergent).  Sparse
witnesses (isolated jump scales) and series that decay to zero are both
handled correctly by this reduction, which a naive last-third monotonicity
test is not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exponent import (
    ExponentFunction,
    classify_monotonicity,
    conjugate_reciprocal,
    monotone_prefix,
)
from .grids import LogGrid, SampledFunction, integrate_dlog
from .hardy import (
    OperatorNormResult,
    dyadic_indicator_family,
    necessity_family,
    operator_norm_lower_bound,
    power_family,
    random_step_family,
)
from .lpnorm import norm_of_inverse_x

__all__ = [
    "BoundednessVerdict",
    "CriterionReport",
    "classify_series",
    "condition_A",
    "condition_B",
    "criterion_C2",
    "criterion_C3",
    "criterion_C4",
    "criterion_C5",
    "almost_decreasing_constant",
    "dyadic_oscillation",
    "phi_doubling",
    "equivalence_audit",
]

PLATEAU_THRESHOLD = 0.10
GROWTH_THRESHOLD = 1.5
_EXP_GUARD = 700.0


@dataclass(frozen=True)
class BoundednessVerdict:
    cls: str  # "bounded" | "divergent" | "inconclusive"
    sup_value: float
    series: tuple  # ((parameter, value), ...)
    trend_slope: float
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "class": self.cls,
            "sup": self.sup_value,
            "series": [[float(p), float(v)] for p, v in self.series],
            "trend_slope": self.trend_slope,
            "notes": list(self.notes),
        }


def classify_series(params, values, plateau: float = PLATEAU_THRESHOLD,
                    growth: float = GROWTH_THRESHOLD,
                    notes: tuple[str, ...] = ()) -> BoundednessVerdict:
    """Trend verdict for a series of criterion values at dyadic scales."""
    params = np.asarray(params, dtype=float)
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return BoundednessVerdict("inconclusive", math.nan, (), math.nan,
                                  notes + ("empty series",))
    series = tuple(zip(params.tolist(), values.tolist()))
    if np.any(np.isinf(values)):
        return BoundednessVerdict("divergent", math.inf, series, math.inf,
                                  notes + ("overflow in criterion value",))
    run = np.maximum.accumulate(values)
    sup = float(run[-1])
    n = values.size
    i0 = n - max(2, n // 3)
    last = values[i0:]
    slope = float(np.polyfit(params[i0:], last, 1)[0]) if last.size > 1 else 0.0
    if sup <= 0.0:
        return BoundednessVerdict("bounded", max(sup, 0.0), series, slope, notes)
    if (run[-1] - run[i0]) / run[-1] < plateau:
        return BoundednessVerdict("bounded", sup, series, slope, notes)
    positive = run[run > 0.0]
    overall = run[-1] / positive[0] if positive.size else math.inf
    if overall > growth:
        return BoundednessVerdict("divergent", sup, series, slope, notes)
    return BoundednessVerdict("inconclusive", sup, series, slope, notes)


# ---------------------------------------------------------------------------
# dyadic-block scanning helpers

def _dyadic_block_sup(grid: LogGrid, xs: np.ndarray,
                      vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sup of vals per dyadic block (2^-j-1, 2^-j], deepest blocks last...

    Blocks are returned ordered from j=1 (near 1/2) down toward x_min, so
    the series runs toward the origin like every other criterion series.
    """
    j = np.floor(-np.log2(xs)).astype(int)
    j = np.maximum(j, 1)
    levels = np.arange(1, int(j.max()) + 1)
    sups = np.full(levels.shape, -math.inf)
    for idx, lv in enumerate(levels):
        mask = j == lv
        if np.any(mask):
            sups[idx] = float(np.max(vals[mask]))
    keep = sups > -math.inf
    return levels[keep], sups[keep]


def _scan_points(grid: LogGrid, lo: float, hi: float = 0.5) -> np.ndarray:
    """Grid points in [lo, hi] plus the exact dyadic block edges, so
    block suprema don't depend on how nodes fall relative to the edges."""
    xs = grid.points[(grid.points >= lo) & (grid.points <= hi)]
    edges = 2.0 ** -np.arange(1, int(math.log2(1.0 / max(lo, grid.x_min))))
    edges = edges[edges >= lo]
    return np.unique(np.concatenate([xs, edges]))


def condition_A(p: ExponentFunction, grid: LogGrid) -> BoundednessVerdict:
    """Trend of |p(x) - p(0)| * ln(1/x) toward the origin."""
    p0 = p.limit_at_origin()
    xs = _scan_points(grid, grid.x_min)
    vals = np.abs(p.eval(xs) - p0) * (-np.log(xs))
    levels, sups = _dyadic_block_sup(grid, xs, vals)
    notes = ("p(0) approximate",) if p.origin_approximate else ()
    return classify_series(levels, sups, notes=notes)


def condition_B(p: ExponentFunction, grid: LogGrid) -> BoundednessVerdict:
    """Trend of [p(x) - p(x/2)] * ln(1/x); also reports the sufficiency
    margin against p(0)*(p(0)-1)."""
    xs = _scan_points(grid, 2.0 * grid.x_min)
    vals = (p.eval(xs) - p.eval(xs / 2.0)) * (-np.log(xs))
    levels, sups = _dyadic_block_sup(grid, xs, vals)
    verdict = classify_series(levels, sups)
    p0 = p.limit_at_origin()
    margin = p0 * (p0 - 1.0)
    if verdict.cls == "bounded":
        ok = verdict.sup_value < margin
        note = (f"sufficiency margin B={verdict.sup_value:.4g} "
                f"{'<' if ok else '>='} p(0)(p(0)-1)={margin:.4g}",)
        verdict = BoundednessVerdict(verdict.cls, verdict.sup_value,
                                     verdict.series, verdict.trend_slope,
                                     verdict.notes + note)
    return verdict


def default_a_list(grid: LogGrid, delta: float, depth: int) -> list[float]:
    out = []
    for j in range(1, depth + 1):
        a = 2.0 ** -j
        if a >= delta:
            continue
        if a < 2.0 * grid.x_min:
            break
        out.append(a)
    return out


def _phi_function(p: ExponentFunction, grid: LogGrid) -> SampledFunction:
    logphi = (1.0 - 1.0 / p.eval(grid.points)) * (-grid.u)
    return SampledFunction(grid, np.exp(np.minimum(logphi, _EXP_GUARD)),
                           interp="powerlaw")


def criterion_C2(p: ExponentFunction, grid: LogGrid, a_list=None,
                 delta: float = 1.0) -> BoundednessVerdict:
    """r(a) = (integral_a^delta phi dx/x) / phi(a)."""
    if a_list is None:
        a_list = default_a_list(grid, delta, 36)
    phi_f = _phi_function(p, grid)
    levels, vals = [], []
    for a in a_list:
        num = integrate_dlog(phi_f, a, delta)
        la = (1.0 - 1.0 / p.eval(a)) * math.log(1.0 / a)
        vals.append(num * math.exp(-la))
        levels.append(-math.log2(a))
    return classify_series(levels, vals)


def criterion_C4(p: ExponentFunction, grid: LogGrid, a_list=None,
                 delta: float = 1.0) -> BoundednessVerdict:
    """s(a) = integral_a^delta (phi(x)/phi(a))**p(x) dx/x, in log space."""
    if a_list is None:
        a_list = default_a_list(grid, delta, 36)
    pn = p.eval(grid.points)
    logphi = (1.0 - 1.0 / pn) * (-grid.u)
    levels, vals = [], []
    for a in a_list:
        la = (1.0 - 1.0 / p.eval(a)) * math.log(1.0 / a)
        expo = pn * (logphi - la)
        if np.any(expo > _EXP_GUARD):
            vals.append(math.inf)
        else:
            w = SampledFunction(grid, np.exp(expo), interp="powerlaw")
            vals.append(integrate_dlog(w, a, delta))
        levels.append(-math.log2(a))
    return classify_series(levels, vals)


def criterion_C5(p: ExponentFunction, grid: LogGrid, a_list=None,
                 delta: float = 1.0, tol: float = 1e-10) -> BoundednessVerdict:
    """||x^-1|| over (a, delta) divided by a**(-1/p'(a))."""
    if a_list is None:
        a_list = default_a_list(grid, delta, 36)
    levels, vals = [], []
    for a in a_list:
        nv = norm_of_inverse_x(p, grid, a, delta, tol=tol)
        la = (1.0 - 1.0 / p.eval(a)) * math.log(1.0 / a)
        vals.append(nv.value * math.exp(-la))
        levels.append(-math.log2(a))
    return classify_series(levels, vals)


def almost_decreasing_constant(values: np.ndarray) -> float:
    """sup over i <= j of v_j / v_i, via one reverse suffix-maximum scan."""
    v = np.asarray(values, dtype=float)
    if np.any(v <= 0.0):
        raise ValueError("almost_decreasing_constant requires positive values")
    suffix_max = np.maximum.accumulate(v[::-1])[::-1]
    return float(np.max(suffix_max / v))


def criterion_C3(p: ExponentFunction, grid: LogGrid, eps_list=None,
                 delta: float = 1.0, eps_depth: int = 13,
                 depth_stops: int = 12) -> tuple[float | None, float,
                                                 BoundednessVerdict]:
    """Search for eps making x**eps * phi(x) almost decreasing.

    For each eps the almost-decreasing constant C(eps) is recomputed on
    progressively deeper suffixes of the grid.  An eps is a valid witness
    only when ln C stops growing with depth; this rejects the finite-grid
    artifact C(eps) ~ x_min**(-eps), which passes any fixed threshold as
    eps -> 0 although no fixed eps works asymptotically.
    """
    mask = grid.points <= delta
    pts = grid.points[mask]
    u = grid.u[mask]
    logphi = (1.0 - 1.0 / p.eval(pts)) * (-u)
    if eps_list is None:
        _, p_plus, _ = p.bounds((0.0, delta))
        eps0 = 1.0 - 1.0 / p_plus
        if eps0 < 1e-6:
            eps0 = 0.5
        eps_list = [eps0 * 2.0 ** -k for k in range(max(1, eps_depth))]

    depths = np.linspace(math.log(grid.x_min) / depth_stops,
                         math.log(grid.x_min), depth_stops)
    candidates = []
    states = []
    for eps in eps_list:
        logv = eps * u + logphi
        ln_c = []
        for ud in depths:
            sub = logv[u >= ud]
            suffix = np.maximum.accumulate(sub[::-1])[::-1]
            ln_c.append(float(np.max(suffix - sub)))
        full = ln_c[-1]
        half = ln_c[depth_stops // 2 - 1]
        growing = (full - half) > PLATEAU_THRESHOLD * full + 1e-9
        states.append("growing" if growing else "stable")
        if not growing:
            candidates.append((math.exp(full), eps))
    if candidates:
        const, best_eps = min(candidates)
        verdict = BoundednessVerdict(
            "bounded", const, ((best_eps, const),), 0.0,
            (f"witness eps={best_eps:.6g}",))
        return best_eps, const, verdict
    cls = "divergent" if all(s == "growing" for s in states) else "inconclusive"
    worst = math.inf
    verdict = BoundednessVerdict(cls, worst, (), math.nan,
                                 ("no depth-stable eps found",))
    return None, worst, verdict


def dyadic_oscillation(p: ExponentFunction,
                       grid: LogGrid) -> tuple[float, BoundednessVerdict]:
    """|1/p'(2x) - 1/p'(x)| * ln(1/x), scanned over x <= 1/4 so the
    doubled argument stays in the origin-governed half of the domain."""
    xs = _scan_points(grid, grid.x_min, 0.25)
    osc = np.abs(conjugate_reciprocal(p, 2.0 * xs)
                 - conjugate_reciprocal(p, xs)) * (-np.log(xs))
    levels, sups = _dyadic_block_sup(grid, xs, osc)
    verdict = classify_series(levels, sups)
    return verdict.sup_value, verdict


def phi_doubling(p: ExponentFunction, grid: LogGrid) -> float:
    """sup of phi(y)/phi(x) over y in [x/2, 2x], x < 1/4."""
    logphi = (1.0 - 1.0 / p.eval(grid.points)) * (-grid.u)
    window = int(round(math.log(2.0) / grid.h))
    scan = grid.points < 0.25
    best = 0.0
    for off in range(-window, window + 1):
        if off == 0:
            continue
        i = np.arange(grid.n)
        j = i + off
        valid = (j >= 0) & (j < grid.n) & scan
        # keep |ln(y/x)| <= ln 2 exactly
        valid &= np.abs(off * grid.h) <= math.log(2.0) + 1e-12
        if np.any(valid):
            best = max(best, float(np.max(logphi[j[valid]] - logphi[i[valid]])))
    return math.exp(best)


# ---------------------------------------------------------------------------
# the audit

@dataclass(frozen=True)
class CriterionReport:
    exponent_id: str
    monotonicity: str
    delta: float
    p0: float
    p_minus: float
    p_plus: float
    verdicts: dict  # name -> BoundednessVerdict
    c3_best_eps: float | None
    c3_constant: float
    oscillation_sup: float
    doubling_constant: float
    expected_class: str | None
    agreement: bool
    empirical_c1: OperatorNormResult
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent_id,
            "monotonicity": self.monotonicity,
            "delta": self.delta,
            "p0": self.p0,
            "p_minus": self.p_minus,
            "p_plus": self.p_plus,
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "c3_best_eps": self.c3_best_eps,
            "c3_constant": (None if math.isinf(self.c3_constant)
                            else self.c3_constant),
            "oscillation_sup": self.oscillation_sup,
            "doubling_constant": self.doubling_constant,
            "expected_class": self.expected_class,
            "agreement": self.agreement,
            "operator_norm_lower_bound": {
                "value": self.empirical_c1.value,
                "argmax": self.empirical_c1.argmax,
                "quotients": [list(q) for q in self.empirical_c1.quotients],
                "skipped": list(self.empirical_c1.skipped),
            },
            "notes": list(self.notes),
        }


def _classes_conflict(a: str, b: str) -> bool:
    return {a, b} == {"bounded", "divergent"}


def equivalence_audit(p: ExponentFunction, grid: LogGrid, *,
                      a_depth: int = 36, delta: float | None = None,
                      eps_depth: int = 13,
                      necessity_depth: int = 33, norm_tol: float = 1e-10,
                      criteria_names: tuple[str, ...] = ("A", "B", "C1", "C2",
                                                         "C3", "C4", "C5"),
                      family_kinds: tuple[str, ...] = ("power", "necessity",
                                                       "dyadic"),
                      exponent_id: str = "") -> CriterionReport:
    """Run all criteria on one exponent and cross-check their verdicts."""
    notes: list[str] = []
    p0 = p.limit_at_origin()
    p_minus, p_plus, exact_bounds = p.bounds((0.0, 1.0), grid)
    if not exact_bounds:
        notes.append("p bounds are grid approximations")
    if p_minus <= 1.0 + 1e-9:
        notes.append("p_minus = 1: the nonincreasing-case constant "
                     "p-/(p- - 1) degenerates")

    mono = classify_monotonicity(p, 1.0)
    mono_cls = mono.cls
    if delta is None:
        delta = 1.0
        if mono_cls == "nonmonotone":
            prefix = monotone_prefix(p, grid.x_min)
            if prefix > 64.0 * grid.x_min:
                delta = prefix
                mono_cls = "nondecreasing"
                notes.append(f"nondecreasing only on (0, {delta:.3g}); "
                             "criterion integrals cut there")

    a_list = default_a_list(grid, delta, a_depth)
    verdicts: dict[str, BoundednessVerdict] = {}

    if "A" in criteria_names:
        verdicts["A"] = condition_A(p, grid)
    if "B" in criteria_names:
        verdicts["B"] = condition_B(p, grid)
    if "C2" in criteria_names:
        verdicts["C2"] = criterion_C2(p, grid, a_list, delta)
    c3_best_eps, c3_constant = None, math.inf
    if "C3" in criteria_names:
        c3_best_eps, c3_constant, v3 = criterion_C3(p, grid, delta=delta,
                                                    eps_depth=eps_depth)
        verdicts["C3"] = v3
    if "C4" in criteria_names:
        verdicts["C4"] = criterion_C4(p, grid, a_list, delta)
    if "C5" in criteria_names:
        verdicts["C5"] = criterion_C5(p, grid, a_list, delta, tol=norm_tol)

    osc_sup, osc_verdict = dyadic_oscillation(p, grid)
    verdicts["oscillation"] = osc_verdict
    doubling = phi_doubling(p, grid)

    members = []
    if "power" in family_kinds:
        members += power_family(p, grid)
    if "necessity" in family_kinds:
        members += necessity_family(p, grid, depth=necessity_depth)
    if "dyadic" in family_kinds:
        members += dyadic_indicator_family(grid)
    if "random-step" in family_kinds:
        members += random_step_family(grid)
    c1 = operator_norm_lower_bound(p, members, tol=norm_tol)
    if "C1" in criteria_names:
        levels, series = c1.level_series()
        verdicts["C1"] = classify_series(levels, series)

    # expected class and agreement
    expected: str | None = None
    agreement = True
    c1_cls = verdicts["C1"].cls if "C1" in verdicts else "inconclusive"
    crit_classes = [verdicts[k].cls for k in ("C2", "C3", "C4", "C5")
                    if k in verdicts]
    if mono_cls == "nonincreasing":
        expected = "bounded"
        agreement = c1_cls == "bounded"
        if not agreement:
            notes.append("nonincreasing exponent but empirical operator "
                         f"norm trend is {c1_cls}")
    elif mono_cls == "nondecreasing":
        if p0 <= 1.0 + 1e-9:
            expected = "divergent"
            notes.append("p(0) = 1: boundedness is impossible for "
                         "nondecreasing exponents")
        coincide = len(set(crit_classes)) <= 1
        if not coincide:
            agreement = False
            notes.append(f"criterion classes disagree: {crit_classes}")
        else:
            common = crit_classes[0] if crit_classes else "inconclusive"
            if expected is not None and common != expected:
                agreement = False
                notes.append(f"classes are {common}, expected {expected}")
            if _classes_conflict(common, c1_cls):
                agreement = False
                notes.append(f"empirical trend {c1_cls} conflicts with "
                             f"criterion class {common}")
    else:
        notes.append("exponent is not monotone near 0; the equivalence "
                     "theorem does not apply")

    return CriterionReport(
        exponent_id=exponent_id,
        monotonicity=mono_cls + (" (constant)" if mono.constant else ""),
        delta=delta,
        p0=p0,
        p_minus=p_minus,
        p_plus=p_plus,
        verdicts=verdicts,
        c3_best_eps=c3_best_eps,
        c3_constant=c3_constant,
        oscillation_sup=osc_sup,
        doubling_constant=doubling,
        expected_class=expected,
        agreement=agreement,
        empirical_c1=c1,
        notes=tuple(notes),
    )
