import numpy as np
import pytest

from cpdshift import (
    AtomicMeasure,
    ScalarTriplet,
    validate_triplet,
    wab_classify,
)

WAB_GRID_A = (0.25, 0.5, 1.0, 2.0)
WAB_GRID_B = (1.0, 1.5, 2.0, 3.0)


def random_type_iii_triplet(rng) -> ScalarTriplet:
    """Validated triplet with at least one atom off the origin (type III)."""
    n_atoms = int(rng.integers(1, 4))
    pts: set[float] = set()
    while len(pts) < n_atoms:
        x = float(rng.uniform(0.05, 5.0))
        if abs(x - 1.0) < 0.1:
            continue
        pts.add(round(x, 6))
    masses = rng.uniform(0.1, 2.0, size=n_atoms)
    nu = AtomicMeasure(tuple((p, float(m)) for p, m in zip(sorted(pts), masses)))
    c = 0.0 if rng.random() < 0.5 else float(rng.uniform(0.0, 1.0))
    b = float(rng.uniform(0.0, 2.0))
    if rng.random() < 0.2 and c == 0.0 and nu.support_max() < 1.0:
        i1, _ = nu.resolvent_integrals()
        b = 0.5 * i1  # halfway into the negative admissible range
    t = ScalarTriplet(b, c, nu)
    assert validate_triplet(t).is_yes
    return t


def wab_grid_triplets():
    """(triplet, a, b) for every CPD member of the acceptance grid."""
    out = []
    for a in WAB_GRID_A:
        for b in WAB_GRID_B:
            cl = wab_classify(a, b)
            if cl.cpd:
                out.append((cl.triplet, a, b))
    return out


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def corpus(rng):
    """200 validated triplets: random type III plus the two-parameter grid."""
    wab = wab_grid_triplets()
    random_part = [random_type_iii_triplet(rng) for _ in range(200 - len(wab))]
    return [(t, "random") for t in random_part] + [(t, "wab") for t, _, _ in wab]


def forced_subnormal_triplet(rng, max_point=1.6) -> ScalarTriplet:
    """Triplet built to satisfy the resolvent criterion exactly."""
    n_atoms = int(rng.integers(1, 3))
    pts: set[float] = set()
    while len(pts) < n_atoms:
        x = float(rng.uniform(0.05, max_point))
        if abs(x - 1.0) < 0.1:
            continue
        pts.add(round(x, 6))
    masses = rng.uniform(0.3, 1.0, size=n_atoms)
    nu_raw = AtomicMeasure(tuple((p, float(m)) for p, m in zip(sorted(pts), masses)))
    _, i2_raw = nu_raw.resolvent_integrals()
    scale = float(rng.uniform(0.5, 0.95)) / i2_raw
    nu = AtomicMeasure(tuple((p, m * scale) for p, m in nu_raw.atoms))
    i1, _ = nu.resolvent_integrals()
    return ScalarTriplet(i1, 0.0, nu)


def perturbed_triplet(rng, base: ScalarTriplet) -> ScalarTriplet:
    """Offset b by +-0.1, keeping whichever direction still validates."""
    sign = -1.0 if rng.random() < 0.5 else 1.0
    for s in (sign, -sign):
        t = ScalarTriplet(base.b + s * 0.1, base.c, base.nu)
        if validate_triplet(t).is_yes:
            return t
    raise AssertionError("neither perturbation direction validates")


@pytest.fixture(scope="session")
def subnormality_corpus(rng):
    """50 forced-subnormal triplets and 50 perturbed (non-subnormal) ones."""
    forced = [forced_subnormal_triplet(rng) for _ in range(50)]
    perturbed = [perturbed_triplet(rng, t) for t in forced]
    return forced, perturbed
