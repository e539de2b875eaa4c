import math

import numpy as np
import pytest

from cpdshift import (
    AtomicMeasure,
    MomentSource,
    ScalarTriplet,
    alevy_scenario,
    as_moment_source,
    intertwiner_check,
    intertwiner_defect,
    point_mass,
    quasi_affine_test,
    shift_matrix,
    similarity_test,
    wab_classify,
    zero_measure,
)

ISO = ScalarTriplet(0.0, 0.0, zero_measure())
TWO_ISO = ScalarTriplet(1.0, 0.0, zero_measure())  # moments 1 + n


def trip(b, c, atoms=()):
    return ScalarTriplet(b, c, AtomicMeasure(tuple(atoms)))


class TestQuasiAffine:
    def test_reflexive(self):
        for t in (ISO, TWO_ISO, trip(0.0, 0.0, [(2.0, 1.0)])):
            assert quasi_affine_test(t, t).is_yes

    def test_nonsubnormal_transform_of_unweighted_shift(self):
        # ratio 1/gamma_n -> 0: bounded
        v = quasi_affine_test(trip(0.0, 0.3, [(2.0, 1.0)]), ISO)
        assert v.is_yes
        assert v.witness["sup_ratio"] <= 1.0 + 1e-12

    def test_geometric_growth_unbounded(self):
        v = quasi_affine_test([1.0] * 600, [math.sqrt(2.0)] * 600)  # 2^n over 1
        assert v.is_no
        assert v.witness["slope"] > 1e-3

    def test_moment_source_kinds(self):
        from_weights = as_moment_source([1.0, 1.0, 1.0])
        assert from_weights.log_moment(2) == 0.0
        from_measure = as_moment_source(point_mass(4.0))
        assert math.isclose(from_measure.log_moment(3), 3 * math.log(4.0))
        from_triplet = as_moment_source(ISO)
        assert from_triplet.log_moment(5) == 0.0

    def test_weight_list_limits_window(self):
        v = quasi_affine_test([1.0] * 40, [1.0] * 40, n_max=512)
        assert v.witness["n_max"] == 40


class TestSimilarity:
    @pytest.mark.parametrize("a", [0.25, 0.5, 0.9])
    def test_contractive_family_similar_to_unweighted_shift(self, a):
        v = similarity_test(wab_classify(a, 1.0).triplet, ISO)
        assert v.is_yes

    def test_two_isometry_not_similar_to_unweighted_shift(self):
        # moments 1 + n are unbounded; the reverse ratio infimum is 0
        v = similarity_test(TWO_ISO, ISO)
        assert v.is_no

    def test_identical_shifts(self):
        t = trip(0.2, 0.1, [(3.0, 0.5)])
        assert similarity_test(t, t).is_yes

    def test_certified_shift_similar_to_its_model(self):
        # moment ratio against the model shift is beta_n / mu0-total, which a
        # certified floor bounds away from 0
        from cpdshift import model_subnormal, similar_by_beta

        t = trip(0.1, 0.2, [(0.5, 0.4), (2.5, 0.9)])
        assert similar_by_beta(t).is_yes
        model = model_subnormal(t)
        assert similarity_test(t, model).is_yes

    def test_symmetry(self, rng):
        pairs = []
        for _ in range(6):
            w1 = rng.uniform(0.5, 2.0, 40)
            w2 = rng.uniform(0.5, 2.0, 40)
            pairs.append((list(w1), list(w2)))
        for lam, om in pairs:
            assert similarity_test(lam, om).outcome == similarity_test(om, lam).outcome


class TestIntertwiner:
    def test_identity_pair(self):
        assert intertwiner_check(ISO, ISO)

    def test_random_pairs_exact(self, rng):
        for _ in range(10):
            lam = list(rng.uniform(0.5, 2.0, 40))
            om = list(rng.uniform(0.5, 2.0, 40))
            defect, scale = intertwiner_defect(lam, om, m=32)
            assert defect <= 1e-12 * scale

    def test_holds_regardless_of_boundedness(self):
        # ratio unbounded, but the algebraic identity still holds entrywise
        assert intertwiner_check([math.sqrt(2.0)] * 40, [1.0] * 40)

    def test_perturbed_diagonal_fails(self):
        lam = [1.0] * 40
        om = [1.2] * 40
        src_l = MomentSource.from_weights(lam)
        src_o = MomentSource.from_weights(om)
        size = 33
        w_l = shift_matrix(lam, size)
        w_o = shift_matrix(om, size)
        diag = [
            math.exp(0.5 * (src_o.log_moment(n) - src_l.log_moment(n)))
            for n in range(size)
        ]
        diag[7] += 1e-3
        x = np.diag(diag)
        defect = np.abs((x @ w_l - w_o @ x)[:, : size - 1]).max()
        scale = max(np.abs(x @ w_l).max(), np.abs(w_o @ x).max())
        assert defect > 1e-12 * scale


class TestAlevyScenario:
    def test_two_isometry_vs_unweighted_shift(self):
        report = alevy_scenario(TWO_ISO, point_mass(1.0, 1.0))
        assert report["growth"]["certified"]
        n = report["forward"]["ratio_below_1e-6_at"]
        assert n is not None and report["forward"]["ratio_there"] < 1e-6

    def test_quadratic_vs_bernoulli_berger(self):
        berger = AtomicMeasure(((0.0, 0.5), (1.0, 0.5)))
        report = alevy_scenario(trip(0.0, 1.0), berger)
        assert report["forward"]["ratio_below_1e-6_at"] is not None

    def test_reverse_direction(self):
        report = alevy_scenario(trip(0.0, 0.0, [(1.5, 1.0)]), point_mass(2.0, 1.0))
        assert report["reverse"]["ratio_below_1e-6_at"] is not None

    def test_rejects_subnormal_input(self):
        with pytest.raises(ValueError, match="non-subnormal"):
            alevy_scenario(wab_classify(0.5, 1.0).triplet, point_mass(1.0, 1.0))

    def test_rejects_unrelated_berger(self):
        # neither contractive nor supported above nu
        with pytest.raises(ValueError, match="neither"):
            alevy_scenario(trip(0.0, 0.0, [(3.0, 1.0)]), point_mass(2.0, 1.0))
