import math

import pytest

import effdof


def test_two_component_estimates():
    w, s2, nu = [1.0, 1.0], [1.0, 2.0], [4.0, 4.0]
    satt = effdof.satterthwaite_df(w, s2, nu)
    assert satt.value == pytest.approx(7.2, rel=1e-14)
    assert satt.numerator == pytest.approx(9.0)
    assert satt.denominator == pytest.approx(1.25)
    assert effdof.corrected_df(w, s2, nu).value == pytest.approx(8.8, rel=1e-14)
    assert effdof.boardman_df(w, s2, nu).value == pytest.approx(10.8, rel=1e-14)
    assert effdof.satterthwaite_df_harmonic(w, s2, nu) == pytest.approx(7.2, rel=1e-14)
    assert effdof.corrected_df(w, s2, nu).variant == effdof.DfVariant.Corrected


def test_single_component_is_exact():
    assert effdof.corrected_df([2.5], [0.3], [6.1]).value == 6.1
    assert effdof.satterthwaite_df([2.5], [0.3], [6.1]).value == 6.1


def test_weight_summaries():
    assert effdof.kish_neff([1, 1, 1, 1]) == 4.0
    assert effdof.kish_neff([1, 1, 0, 0]) == 2.0
    assert effdof.design_effect([1, 1, 0, 0]) == pytest.approx(2.0)
    assert effdof.relvariance([3, 3, 3]) == 0.0
    assert effdof.weighted_mean([1.0, 3.0], [1.0, 1.0]) == 2.0
    assert effdof.weighted_variance([1.0, 3.0], [1.0, 1.0]) == 1.0


def test_applications():
    assert effdof.jackknife_df([0, 0, 2, 2]) == pytest.approx(10.0)
    assert effdof.welch_corrected_df(10, 10, 1.0, 1.0) == pytest.approx(20.0)
    assert effdof.welch_satterthwaite_df(10, 10, 1.0, 1.0) == pytest.approx(18.0)
    assert effdof.mi_total_variance(1.0, 100.0, 0.2, 5) == pytest.approx(1.24)
    assert effdof.mi_total_df(1.0, 100.0, 0.2, 5) == pytest.approx(95548 / 1237, rel=1e-12)
    assert effdof.mi_total_df(1.0, 37.5, 0.0, 4) == 37.5


def test_exceptions():
    with pytest.raises(effdof.ValidationError):
        effdof.satterthwaite_df([1.0], [1.0], [0.0])
    with pytest.raises(effdof.LengthMismatch):
        effdof.satterthwaite_df([1.0, 1.0], [1.0], [1.0, 1.0])
    with pytest.raises(effdof.AllZeroWeights):
        effdof.kish_neff([0.0, 0.0])
    with pytest.raises(effdof.DegenerateComponents):
        effdof.corrected_df([0.0, 1.0], [1.0, 0.0], [3.0, 3.0])
    with pytest.raises(effdof.DegenerateComponents):
        effdof.jackknife_df([5, 5, 5])
    assert issubclass(effdof.AllZeroWeights, effdof.DegenerateComponents)
    assert issubclass(effdof.ValidationError, effdof.EffdofError)


def test_sampler_mean():
    xs = effdof.sample_component_variances(4.0, 2.0, 200_000, 11)
    mean = sum(xs) / len(xs)
    se = 2.0 * math.sqrt(2.0 / 4.0) / math.sqrt(len(xs))
    assert abs(mean - 2.0) < 4 * se
    assert xs == effdof.sample_component_variances(4.0, 2.0, 200_000, 11)


def test_run_grid_deterministic():
    cfg = effdof.SimConfig()
    cfg.k_values = [4, 2]
    cfg.nu_values = [1.0, 5.0]
    cfg.random_weights = True
    cfg.replicates = 5000
    cfg.seed = 8
    a = effdof.run_grid(cfg)
    b = effdof.run_grid(cfg, threads=3)
    assert [c.k for c in a] == [2, 2, 4, 4]
    assert [(c.mean_satt, c.mean_corr, c.mean_kish) for c in a] == [
        (c.mean_satt, c.mean_corr, c.mean_kish) for c in b
    ]
    assert all(c.replicates == 5000 for c in a)
    assert all(c.mean_corr > c.mean_satt for c in a)
