"""Sufficient criteria for similarity of a type-III shift to a subnormal
shift, and the model subnormal shift itself.

All criteria are sufficient: "no" means the hypotheses do not hold (or a
finite search did not find admissible parameters), never that similarity was
refuted.  The only negative certificates live elsewhere: a vanishing defect
term (two-parameter family) or a necessary-condition failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ScalarTriplet, ShiftSequences, classify_type, require_valid
from .measures import AtomicMeasure
from .verdict import INCONCLUSIVE, NO, YES, NotApplicableError, Verdict

BETA_FLOOR_TAG = "defect-floor-invertibility"
ENDPOINT_ATOM_TAG = "endpoint-atom"
ENDPOINT_LIMINF_TAG = "endpoint-liminf"
WEIGHT_BAND_TAG = "weight-band"
GROWTH_INEQ_TAG = "growth-inequalities"
MODEL_TAG = "model-shift"
B2_IDENTITY_TAG = "defect-moment-identity"

GRID_POINTS = 64


class ModelDegenerateError(ValueError):
    """The model shift exists only for type III; the completion space is too small."""


def _logsumexp(values) -> float:
    vals = [v for v in values if v != -math.inf]
    if not vals:
        return -math.inf
    top = max(vals)
    return top + math.log(math.fsum(math.exp(v - top) for v in vals))


def defect_moment_measure(t: ScalarTriplet) -> AtomicMeasure:
    """nu plus the atom (1, 2c): the measure whose moments are gamma_n * beta_n."""
    if t.c > 0.0:
        return AtomicMeasure.from_atoms(tuple(t.nu.atoms) + ((1.0, 2.0 * t.c),))
    return t.nu


def similar_by_beta(
    t: ScalarTriplet,
    n_scan: int = 512,
    eps_floor: float = 0.0,
    seqs: ShiftSequences | None = None,
) -> Verdict:
    """Certify inf beta_n > 0 (bounded invertibility of the model intertwiner).

    Scans beta_n over a finite prefix and, when some atom of nu exceeds 1,
    adds an asymptotic tail bound

        beta_n >= mass({theta}) theta^n / (P(n) + C theta^n),

    with P a polynomial majorant of the non-dominant part of gamma and C the
    second resolvent sum over the atoms above 1.  The bound is nondecreasing
    past n2 ~ (theta+1)/(theta-1), so its value there floors the whole tail.
    "yes" carries the certified floor; a vanishing beta term is a definitive
    "no" (the shift lies in the two-parameter family); a positive prefix with
    no tail certificate is inconclusive.
    """
    s = seqs if seqs is not None else ShiftSequences(t)
    theta = t.nu.support_max()
    n_tail = None
    if theta > 1.0:
        n_tail = math.ceil((theta + 1.0) / (theta - 1.0)) + 1
    n_top = max(n_scan, n_tail or 0)

    prefix_min, prefix_argmin = math.inf, None
    for n in range(n_top + 1):
        bn = s.beta(n)
        if bn == 0.0:
            return Verdict(
                NO,
                "similar_by_beta",
                BETA_FLOOR_TAG,
                {"witness_index": n, "scanned_to": n_top},
                note="a defect term vanishes; the shift lies in the two-parameter model family",
            )
        if bn < prefix_min:
            prefix_min, prefix_argmin = bn, n

    witness = {
        "prefix_min": prefix_min,
        "prefix_argmin": prefix_argmin,
        "scanned_to": n_top,
    }
    if theta > 1.0:
        tail = _tail_floor(t, n_tail, theta)
        eps = min(prefix_min, tail)
        witness.update({"tail_floor": tail, "tail_from": n_tail, "eps": eps})
        if eps > eps_floor:
            return Verdict(YES, "similar_by_beta", BETA_FLOOR_TAG, witness)
        return Verdict(
            INCONCLUSIVE,
            "similar_by_beta",
            BETA_FLOOR_TAG,
            witness,
            note="certified floor does not exceed eps_floor",
        )
    return Verdict(
        INCONCLUSIVE,
        "similar_by_beta",
        BETA_FLOOR_TAG,
        witness,
        note="no atom above 1; finite prefix positive but no asymptotic certificate",
    )


def _tail_floor(t: ScalarTriplet, n: int, theta: float) -> float:
    mass_top = t.nu.mass_at(theta)
    c_above = math.fsum(w / (p - 1.0) ** 2 for p, w in t.nu.atoms if p > 1.0)
    mass_below = math.fsum(w for p, w in t.nu.atoms if p < 1.0)
    poly = 1.0 + max(t.b, 0.0) * n + t.c * n * n + mass_below * n * (n - 1) / 2.0
    log_theta_n = n * math.log(theta)
    log_den = _logsumexp([math.log(poly), math.log(c_above) + log_theta_n])
    return math.exp(math.log(mass_top) + log_theta_n - log_den)


def criterion_kdwq(t: ScalarTriplet, seqs: ShiftSequences | None = None) -> Verdict:
    """Atom at the top of the support, above 1: similar to a subnormal shift.

    For an atomic nu the finiteness of the resolvent sum above 1 and the atom
    at the endpoint are automatic, so the criterion reduces to theta > 1.
    The witness also tags the non-subnormality side conditions:
        (a) 1 - (resolvent sum above 1) < (resolvent sum below 1),
        (b) b differs from the first resolvent sum,
        (c) c > 0.
    """
    require_valid(t, seqs)
    theta = t.nu.support_max()
    if not theta > 1.0:
        return Verdict(
            NO,
            "criterion_kdwq",
            ENDPOINT_ATOM_TAG,
            {"theta": theta},
            note="sup of the support does not exceed 1; hypotheses not met",
        )
    i1, _ = t.nu.resolvent_integrals()
    i2_above = math.fsum(w / (p - 1.0) ** 2 for p, w in t.nu.atoms if p > 1.0)
    i2_below = math.fsum(w / (p - 1.0) ** 2 for p, w in t.nu.atoms if p < 1.0)
    flags = {
        "a-resolvent-gap": bool(1.0 - i2_above < i2_below),
        "b-mismatch": bool(abs(t.b - i1) > 1e-12),
        "c-positive": bool(t.c > 0.0),
    }
    witness = {
        "theta": theta,
        "theta_mass": t.nu.mass_at(theta),
        "i2_above_one": i2_above,
        "not_subnormal_flags": flags,
        "certifies_not_subnormal": any(flags.values()),
    }
    return Verdict(YES, "criterion_kdwq", ENDPOINT_ATOM_TAG, witness)


def criterion_nyttrs(
    t: ScalarTriplet,
    eps_rule=None,
    n_scan: int = 500,
    seqs: ShiftSequences | None = None,
) -> Verdict:
    """liminf criterion at the top of the support.

    Evaluates a_n = nu([theta - eps_n, theta]) (1 - eps_n/theta)^n with the
    default rule eps_n = 1/n, for which the limit is mass({theta}) e^(-1/theta).
    "yes" when the limit (default rule) or the observed tail infimum (custom
    rule) is positive.
    """
    require_valid(t, seqs)
    theta = t.nu.support_max()
    if not theta > 1.0:
        raise NotApplicableError("sup of the support must exceed 1")
    default_rule = eps_rule is None
    rule = (lambda n: 1.0 / n) if default_rule else eps_rule

    values = []
    for n in range(1, n_scan + 1):
        eps = rule(n)
        if not eps > 0.0:
            raise ValueError(f"eps rule must return positive values, got {eps!r} at n={n}")
        base = 1.0 - eps / theta
        window_mass = t.nu.mass_on(theta - eps, theta)
        values.append(window_mass * (base**n if base > 0.0 else 0.0))
    tail = values[n_scan // 2 :]
    tail_inf = min(tail) if tail else 0.0

    witness = {"theta": theta, "n_scan": n_scan, "tail_inf": tail_inf, "a_last": values[-1]}
    if default_rule:
        limit = t.nu.mass_at(theta) * math.exp(-1.0 / theta)
        witness["limit"] = limit
        outcome = YES if limit > 0.0 else NO
        return Verdict(outcome, "criterion_nyttrs", ENDPOINT_LIMINF_TAG, witness)
    # custom rule: also require the window to stay above 1 along the tail
    shrunk = all(theta - rule(n) > 1.0 for n in range(max(1, n_scan // 2), n_scan + 1))
    witness["window_above_one"] = shrunk
    outcome = YES if (tail_inf > 0.0 and shrunk) else INCONCLUSIVE
    return Verdict(outcome, "criterion_nyttrs", ENDPOINT_LIMINF_TAG, witness)


def criterion_weight_band(
    t: ScalarTriplet,
    n_lo: int = 32,
    n_hi: int = 512,
    seqs: ShiftSequences | None = None,
) -> Verdict:
    """Squared-weight band test on the window [n_lo, n_hi].

    Fits either (tau, M) with 1 + tau <= lambda_n^2 <= 1 + M, tau in (0, 1)
    and (1 - tau)(1 + M) < 1, or tau >= 1 with 1 + tau <= lambda_n^2.  The
    empirical band over the window is the witness; behavior beyond n_hi is not
    extrapolated.
    """
    s = seqs if seqs is not None else ShiftSequences(t)
    band = [s.weight(n) ** 2 for n in range(n_lo, n_hi + 1)]
    lo, hi = min(band), max(band)
    witness = {"n_lo": n_lo, "n_hi": n_hi, "band_min": lo, "band_max": hi}

    if lo >= 2.0:
        witness.update({"family": "tail-above-two", "tau": lo - 1.0})
        return Verdict(YES, "criterion_weight_band", WEIGHT_BAND_TAG, witness)
    tau = lo - 1.0
    m = hi - 1.0
    if 0.0 < tau < 1.0 and m > 0.0 and (1.0 - tau) * (1.0 + m) < 1.0:
        witness.update({"family": "pinched-band", "tau": tau, "M": m})
        return Verdict(YES, "criterion_weight_band", WEIGHT_BAND_TAG, witness)
    return Verdict(
        INCONCLUSIVE,
        "criterion_weight_band",
        WEIGHT_BAND_TAG,
        witness,
        note="no admissible band over the scanned window",
    )


def _family_i(t: ScalarTriplet, total: float, inf_supp: float) -> bool:
    return (
        t.b + t.c >= 1.0
        and 2.0 * t.c + total * (1.0 - t.c) >= t.b
        and total >= 1.0
        and inf_supp >= 2.0 * (1.0 + t.c)
    )


def _family_ii(t: ScalarTriplet, total: float, inf_supp: float, tp: float) -> bool:
    return (
        t.b + t.c + total * tp * (1.0 + tp) >= 1.0
        and 2.0 * t.c + total * (1.0 - 2.0 * tp - 1.5 * tp * tp) >= t.b
        and total * tp * (2.0 + tp) >= 2.0 * t.c
        and inf_supp >= 2.0 + tp
    )


def _family_iii(
    t: ScalarTriplet, total: float, inf_supp: float, theta: float, tp: float, tau: float
) -> bool:
    return (
        # first group
        t.b + t.c >= tau
        and 2.0 * t.c + total * (1.0 - tp / 2.0) >= tau * t.b
        and total * tp >= 2.0 * tau * t.c
        # second group
        and t.b + t.c <= theta - 1.0
        and 2.0 * t.c + total <= (theta - 1.0) * t.b
        and (1.0 - tau) * theta < 1.0
        and inf_supp >= 1.0 + tau + tp
    )


def criterion_ineqsuf(
    t: ScalarTriplet,
    t_param: float | None = None,
    tau: float | None = None,
    grid_points: int = GRID_POINTS,
    seqs: ShiftSequences | None = None,
) -> Verdict:
    """Inequality families over (b, c, nu-total, support endpoints).

    Stated for b >= 0 only; negative b is reported not applicable.  Families
    (ii) and (iii) carry free parameters: supplied values are checked
    literally, otherwise a coarse grid over the generation windows is
    searched (the conditions are open, so the grid suffices in practice).
    """
    require_valid(t, seqs)
    if t.b < 0.0:
        return Verdict(
            INCONCLUSIVE,
            "criterion_ineqsuf",
            GROWTH_INEQ_TAG,
            {"applicable": False},
            note="criterion is stated for b >= 0",
        )
    total = t.nu.total_mass()
    inf_supp = t.nu.support_min()
    theta = t.nu.support_max()

    families: dict[str, dict] = {}
    if _family_i(t, total, inf_supp):
        families["i"] = {}

    t0 = _unit_growth_root()
    if t_param is not None:
        if _family_ii(t, total, inf_supp, t_param):
            families["ii"] = {"t": t_param}
    else:
        for k in range(grid_points):
            tp = t0 * (k + 0.5) / grid_points
            if _family_ii(t, total, inf_supp, tp):
                families["ii"] = {"t": tp}
                break

    if t_param is not None and tau is not None:
        if _family_iii(t, total, inf_supp, theta, t_param, tau):
            families["iii"] = {"t": t_param, "tau": tau}
    else:
        taus = (
            [tau]
            if tau is not None
            else [2.0 / 3.0 + (1.0 / 3.0) * (k + 0.5) / grid_points for k in range(grid_points)]
        )
        found = None
        for tv in taus:
            ts = (
                [t_param]
                if t_param is not None
                else [
                    4.0 / 3.0 + (2.0 * tv - 4.0 / 3.0) * (k + 0.5) / grid_points
                    for k in range(grid_points)
                    if 2.0 * tv > 4.0 / 3.0
                ]
            )
            for tp in ts:
                if _family_iii(t, total, inf_supp, theta, tp, tv):
                    found = {"t": tp, "tau": tv}
                    break
            if found:
                break
        if found:
            families["iii"] = found

    witness = {"applicable": True, "families": families, "nu_total": total, "inf_supp": inf_supp}
    if families:
        return Verdict(YES, "criterion_ineqsuf", GROWTH_INEQ_TAG, witness)
    return Verdict(
        NO,
        "criterion_ineqsuf",
        GROWTH_INEQ_TAG,
        witness,
        note="no family holds (families with free parameters searched on a finite grid)",
    )


def _unit_growth_root() -> float:
    # positive root of 1 - 2t - (3/2) t^2
    return (math.sqrt(10.0) - 2.0) / 3.0


@dataclass(frozen=True)
class ModelShift:
    """Subnormal model shift of a type-III input, given by its Berger measure."""

    mu0: AtomicMeasure
    berger: AtomicMeasure

    def moment(self, n: int) -> float:
        return self.berger.moment(n)

    def log_moment(self, n: int) -> float:
        return self.berger.log_moment(n)

    def weight(self, n: int) -> float:
        return math.exp(0.5 * (self.log_moment(n + 1) - self.log_moment(n)))

    def moments(self, count: int) -> list[float]:
        return [self.moment(n) for n in range(count)]

    def weights(self, count: int) -> list[float]:
        return [self.weight(n) for n in range(count)]


def model_subnormal(t: ScalarTriplet, seqs: ShiftSequences | None = None) -> ModelShift:
    """Model subnormal shift: Berger measure = normalized (nu + 2c at 1).

    The square pushforward of the square-root pushforward returns the same
    measure, so the radial detour collapses to mu0 itself.  Degenerate for
    types I and II (the completion space has dimension 0 or 1).
    """
    s = seqs if seqs is not None else ShiftSequences(t)
    label = classify_type(t, seqs=s)
    if label.kind != "III":
        raise ModelDegenerateError(
            f"model degenerates for type {label.kind} (completion dimension {label.dim})"
        )
    m0 = defect_moment_measure(t)
    return ModelShift(mu0=m0, berger=m0.normalize())


def b2_identity_check(
    t: ScalarTriplet, m_max: int = 64, rtol: float = 1e-9, seqs: ShiftSequences | None = None
) -> bool:
    """gamma_n * beta_n equals the n-th moment of nu + 2c at 1, for n <= m_max."""
    s = seqs if seqs is not None else ShiftSequences(t)
    m0 = defect_moment_measure(t)
    for n in range(m_max + 1):
        lhs = s.gamma(n) * s.beta(n)
        rhs = m0.moment(n)
        if abs(lhs - rhs) > rtol * max(1.0, abs(lhs), abs(rhs)):
            return False
    return True
