"""Subnormality of a CPD weighted shift and the necessary conditions for
similarity to a subnormal operator.

The decisive test is the resolvent criterion: the shift is subnormal exactly
when c = 0, the second resolvent sum of nu at 1 is at most 1, and b equals
the first resolvent sum.  The moment-matrix oracle is an independent finite
certificate (positive semidefiniteness of the Hankel matrix and its shift)
that never consults the resolvent test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ScalarTriplet,
    ShiftSequences,
    classify_type,
    diagonal_triplet,
    require_valid,
)
from .measures import AtomicMeasure
from .verdict import INCONCLUSIVE, NO, YES, Verdict

SUBNORMAL_TAG = "resolvent-criterion"
HANKEL_TAG = "stieltjes-hankel-psd"
DICHOTOMY_TAG = "type-I-II-dichotomy"
NECESSARY_TAG = "similarity-necessary-conditions"

# (ii-b)-style equality of b with the first resolvent sum: exact inputs, so a
# tight absolute tolerance with a reported near-miss band above it.
B_MATCH_ATOL = 1e-12
B_NEAR_MISS = 1e-6

# Hankel verdicts: PSD within tol * norm is "yes"; eigenvalues more negative
# than BAND_FACTOR * tol * norm are a decisive "no"; in between is a declared
# tolerance band (not decisive).
HANKEL_BAND_FACTOR = 10.0

CONDITION_ZERO_ATOL = 1e-12


def is_subnormal(t: ScalarTriplet, seqs: ShiftSequences | None = None) -> Verdict:
    """Resolvent test; on success the witness carries the Berger measure.

    The Berger measure puts mass w/(x-1)^2 at every atom (x, w) of nu and the
    complementary mass 1 - I2 at the point 1, which makes it a probability
    measure reproducing the formal moments.
    """
    require_valid(t, seqs)
    i1, i2 = t.nu.resolvent_integrals()
    conditions = {
        "second_resolvent_at_most_one": bool(i2 <= 1.0 + 1e-12),
        "c_is_zero": t.c == 0.0,
    }
    gap = abs(t.b - i1) if math.isfinite(i1) else math.inf
    conditions["b_matches_first_resolvent"] = bool(gap <= B_MATCH_ATOL)
    witness = {"i1": i1, "i2": i2, "b_gap": gap, "conditions": conditions}

    if not conditions["c_is_zero"] or not conditions["second_resolvent_at_most_one"]:
        return Verdict(NO, "is_subnormal", SUBNORMAL_TAG, witness)
    if gap <= B_MATCH_ATOL:
        witness["berger"] = berger_measure(t)
        return Verdict(YES, "is_subnormal", SUBNORMAL_TAG, witness)
    if gap <= B_NEAR_MISS:
        return Verdict(
            INCONCLUSIVE,
            "is_subnormal",
            SUBNORMAL_TAG,
            witness,
            note=f"b misses the first resolvent sum by {gap:.3e} (near-miss band)",
        )
    return Verdict(NO, "is_subnormal", SUBNORMAL_TAG, witness)


def berger_measure(t: ScalarTriplet) -> AtomicMeasure:
    """Berger measure of a subnormal triplet (caller checks the criterion)."""
    _, i2 = t.nu.resolvent_integrals()
    atoms = [(p, w / (p - 1.0) ** 2) for p, w in t.nu.atoms]
    mass_at_one = 1.0 - i2
    if mass_at_one > 0.0:
        atoms.append((1.0, mass_at_one))
    return AtomicMeasure.from_atoms(atoms)


def hankel_psd_oracle(moments, order: int = 8, tol: float = 1e-8) -> Verdict:
    """Finite Stieltjes certificate: PSD of [m_{i+j}] and [m_{i+j+1}], i,j <= order.

    Independent of the resolvent test.  A verdict is decisive unless the most
    negative normalized eigenvalue falls in the band (-BAND_FACTOR*tol, -tol].
    """
    need = 2 * order + 2
    if len(moments) < need:
        raise ValueError(f"need at least {need} moments for order {order}, got {len(moments)}")
    m = np.asarray(moments[:need], dtype=float)
    if not np.all(np.isfinite(m)):
        raise ValueError("moments must be finite")
    idx = np.arange(order + 1)
    h = m[idx[:, None] + idx[None, :]]
    h_shift = m[idx[:, None] + idx[None, :] + 1]

    worst = 0.0  # most negative normalized eigenvalue over both matrices
    for mat in (h, h_shift):
        norm = float(np.linalg.norm(mat, np.inf))
        if norm == 0.0:
            continue
        lam_min = float(np.linalg.eigvalsh(mat)[0])
        worst = min(worst, lam_min / norm)

    psd = worst >= -tol
    decisive = psd or worst < -HANKEL_BAND_FACTOR * tol
    witness = {
        "order": order,
        "tol": tol,
        "min_normalized_eigenvalue": worst,
        "decisive": decisive,
    }
    outcome = YES if psd else (NO if decisive else INCONCLUSIVE)
    return Verdict(outcome, "hankel_psd_oracle", HANKEL_TAG, witness)


@dataclass(frozen=True)
class ConditionResult:
    id: str
    passed: bool
    witness_index: int | None = None
    detail: str = ""

    def to_json(self) -> dict:
        doc = {"id": self.id, "status": "pass" if self.passed else "fail"}
        if self.witness_index is not None:
            doc["witness_index"] = self.witness_index
        if self.detail:
            doc["detail"] = self.detail
        return doc


@dataclass(frozen=True)
class NecessaryReport:
    applicable: bool
    note: str = ""
    conditions: tuple[ConditionResult, ...] = ()
    checked_up_to: int = 0

    @property
    def not_similar(self) -> bool:
        return self.applicable and any(not c.passed for c in self.conditions)

    @property
    def failed_ids(self) -> list[str]:
        return [c.id for c in self.conditions if not c.passed]

    def to_json(self) -> dict:
        return {
            "applicable": self.applicable,
            "note": self.note,
            "conditions": [c.to_json() for c in self.conditions],
            "checked_up_to": self.checked_up_to,
            "certifies_not_similar": self.not_similar,
        }


def necessary_conditions(
    t: ScalarTriplet, k_max: int = 64, seqs: ShiftSequences | None = None
) -> NecessaryReport:
    """Similarity-to-subnormal necessary conditions, checked on the diagonal triplet.

    Applicable only when the support of nu lies in [0, 1]; outside that range
    no shift-level criterion is available and the report says so.  The
    conditions quantify over every diagonal index, verified here for k up to
    k_max:
        (i)   c = 0,
        (ii)  b_k + nu_k-total <= 0 for all k,
        (iii) b_k + nu_k-total = 0 for all k, or nu charges a point != 0,
        (iv)  some b_k < 0, or nu has no atom in the open interval (0, 1).
    Any failure certifies that the shift is not similar to a subnormal
    operator.
    """
    s = seqs if seqs is not None else ShiftSequences(t)
    if t.nu.support_max() > 1.0:
        return NecessaryReport(
            applicable=False,
            note="support of nu is not contained in [0, 1]; conditions do not apply",
        )

    diag = [diagonal_triplet(t, k, seqs=s) for k in range(k_max + 1)]
    sums = [d.b_k + d.nu_k.total_mass() for d in diag]

    cond_i = ConditionResult("i-c-zero", t.c == 0.0, detail="c = 0")

    bad_ii = next((k for k, v in enumerate(sums) if v > CONDITION_ZERO_ATOL), None)
    cond_ii = ConditionResult(
        "ii-diagonal-sum-nonpositive",
        bad_ii is None,
        witness_index=bad_ii,
        detail=f"b_k + nu_k-total <= 0, verified for k <= {k_max}",
    )

    all_zero = all(abs(v) <= CONDITION_ZERO_ATOL for v in sums)
    off_origin = any(p > 0.0 for p, _ in t.nu.atoms)
    bad_iii = None
    if not (all_zero or off_origin):
        bad_iii = next(k for k, v in enumerate(sums) if abs(v) > CONDITION_ZERO_ATOL)
    cond_iii = ConditionResult(
        "iii-zero-sum-or-offorigin-support",
        all_zero or off_origin,
        witness_index=bad_iii,
        detail=f"b_k + nu_k-total = 0 for all k <= {k_max}, or supp nu != {{0}}",
    )

    some_negative_b = any(d.b_k < -CONDITION_ZERO_ATOL for d in diag)
    interior = next((i for i, (p, _) in enumerate(t.nu.atoms) if 0.0 < p < 1.0), None)
    cond_iv = ConditionResult(
        "iv-negative-b-or-no-interior-atom",
        some_negative_b or interior is None,
        witness_index=None if (some_negative_b or interior is None) else interior,
        detail="some b_k < 0, or nu has no atom in (0, 1)",
    )

    return NecessaryReport(
        applicable=True,
        conditions=(cond_i, cond_ii, cond_iii, cond_iv),
        checked_up_to=k_max,
    )


def dichotomy_check(t: ScalarTriplet, seqs: ShiftSequences | None = None) -> Verdict:
    """Types I and II are subnormal or not similar to any subnormal operator.

    Outcome answers "similar to a subnormal operator?": yes means the shift is
    itself subnormal, no means not similar at all.  Type III input is an
    error.
    """
    s = seqs if seqs is not None else ShiftSequences(t)
    label = classify_type(t, seqs=s)
    if label.kind == "III":
        raise ValueError("dichotomy applies only to types I/II")
    sub = is_subnormal(t, seqs=s)
    witness = {"type": label.kind, "subnormal": sub.outcome}
    if sub.is_yes:
        witness["classification"] = "subnormal"
        witness["berger"] = sub.witness["berger"]
        return Verdict(YES, "dichotomy_check", DICHOTOMY_TAG, witness)
    if sub.is_no:
        witness["classification"] = "not_similar_to_subnormal"
        return Verdict(NO, "dichotomy_check", DICHOTOMY_TAG, witness)
    return Verdict(INCONCLUSIVE, "dichotomy_check", DICHOTOMY_TAG, witness, note=sub.note)
