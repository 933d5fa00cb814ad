"""Beta kernel estimators, the boundary kernel, and the Gaussian baselines."""

import math

import numpy as np
import pytest

from unitkde.errors import ConfigurationError, DomainError, NumericalError
from unitkde.kernels import (
    BETA_F1,
    BETA_F2,
    FAMILIES,
    GAUSS_LOGIT,
    GAUSS_REFLECT,
    DensityModel,
    Sample,
    evaluate,
    evaluate_f1,
    evaluate_f2,
    evaluate_logit,
    evaluate_reflection,
    kernel_shape_params,
    make_model,
    normalize,
    point_contributions,
    rho,
    total_mass,
)
from unitkde.quadrature import make_rule

RULE = make_rule(16, 32)


def test_rho_boundary_identities():
    # the radicand is a perfect square at both ends of the strip, so the
    # identities hold to roundoff, not just approximately
    for h in np.arange(0.01, 0.2401, 0.01):
        h = float(h)
        assert abs(rho(0.0, h) - 1.0) < 1e-12
        assert abs(rho(2.0 * h, h) - 2.0) < 1e-12


def test_rho_pinned_value():
    # 2h^2 + 2.5 - sqrt(4h^4 + 6h^2 + 2.25 - x^2 - x/h) at x = h = 0.1
    assert rho(0.1, 0.1) == pytest.approx(1.3796492, abs=1e-6)
    assert rho(0.1, 0.1) == pytest.approx(1.3796491767881254, rel=1e-14)


def test_rho_monotone_on_strip():
    h = 0.15
    x = np.linspace(0.0, 2.0 * h, 200)
    values = rho(x, h)
    assert np.all(np.diff(values) > 0.0)
    assert np.all((values >= 1.0 - 1e-12) & (values <= 2.0 + 1e-12))


def test_rho_domain():
    with pytest.raises(DomainError):
        rho(-0.01, 0.1)
    with pytest.raises(DomainError):
        rho(0.21, 0.1)
    with pytest.raises(DomainError):
        rho(0.1, 0.0)


def test_kernel_shape_params_branches():
    h = 0.1
    # interior: (x/h, (1-x)/h)
    p, q = kernel_shape_params(0.5, h)
    assert (p, q) == (pytest.approx(5.0), pytest.approx(5.0))
    # left strip swaps p for rho, right strip swaps q
    p, q = kernel_shape_params(0.0, h)
    assert p == pytest.approx(1.0, abs=1e-12)
    assert q == pytest.approx(10.0, abs=1e-12)
    p, q = kernel_shape_params(1.0, h)
    assert p == pytest.approx(10.0, abs=1e-12)
    assert q == pytest.approx(1.0, abs=1e-12)


def test_kernel_shape_params_continuous_at_joins():
    eps = 1e-9
    for h in (0.01, 0.05, 0.1, 0.2, 0.24):
        for x_join in (2.0 * h, 1.0 - 2.0 * h):
            p0, q0 = kernel_shape_params(x_join - eps, h)
            p1, q1 = kernel_shape_params(x_join + eps, h)
            assert abs(p1 - p0) < 1e-5
            assert abs(q1 - q0) < 1e-5


def test_kernel_shape_params_validation():
    with pytest.raises(ConfigurationError):
        kernel_shape_params(0.5, 0.25)
    with pytest.raises(DomainError):
        kernel_shape_params(1.2, 0.1)


def test_boundary_estimator_pinned_values():
    model = make_model(BETA_F2, Sample(np.array([0.5])), 0.1)
    # interior x=0.5: Beta(5,5) kernel at t=0.5 is 630/256
    assert evaluate_f2(model, 0.5) == pytest.approx(2.4609375, rel=1e-12)
    # x=0: shapes (rho(0)=1, 10), Beta(1,10) at t=0.5 is 10*(1/2)^9
    assert evaluate_f2(model, 0.0) == pytest.approx(0.01953125, rel=1e-12)


def test_interior_estimator_pinned_values():
    model = make_model(BETA_F1, Sample(np.array([0.5])), 0.1)
    # x=0.5: shapes (6,6), Beta(6,6) at t=0.5 is 2772/1024
    assert evaluate_f1(model, 0.5) == pytest.approx(2.70703125, rel=1e-12)
    # x=0: shapes (1,11), Beta(1,11) at t=0.5 is 11*(1/2)^10
    assert evaluate_f1(model, 0.0) == pytest.approx(0.0107421875, rel=1e-12)


def test_reflection_pinned_value():
    model = make_model(GAUSS_REFLECT, Sample(np.array([0.0])), 0.1)
    # the data point and its reflection across 0 coincide: 2*phi_h(0)
    assert evaluate_reflection(model, 0.0) == pytest.approx(
        2.0 / (0.1 * math.sqrt(2.0 * math.pi)), rel=1e-12
    )
    assert evaluate_reflection(model, 0.0) == pytest.approx(7.9788456, abs=1e-6)


def test_logit_pinned_value():
    model = make_model(GAUSS_LOGIT, Sample(np.array([0.5])), 1.0)
    # logit distance 0, Jacobian 1/(0.5*0.5)
    assert evaluate_logit(model, 0.5) == pytest.approx(4.0 / math.sqrt(2.0 * math.pi), rel=1e-12)
    assert evaluate_logit(model, 0.5) == pytest.approx(1.5957691, abs=1e-6)


def test_family_checked_evaluators():
    model = make_model(BETA_F1, Sample(np.array([0.5])), 0.1)
    with pytest.raises(ConfigurationError):
        evaluate_f2(model, 0.5)
    with pytest.raises(ConfigurationError):
        evaluate_logit(model, 0.5)


@pytest.mark.parametrize("family", FAMILIES)
def test_mirror_symmetry(family):
    # reflecting the data through x -> 1-x reflects the estimate
    rng = np.random.default_rng(42)
    data = rng.uniform(0.05, 0.95, size=40)
    x = np.linspace(0.0, 1.0, 21)
    m = make_model(family, Sample(data), 0.12)
    m_ref = make_model(family, Sample(1.0 - data), 0.12)
    assert np.allclose(evaluate(m, x), evaluate(m_ref, 1.0 - x), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("family", FAMILIES)
def test_evaluate_matches_point_contributions(family):
    rng = np.random.default_rng(7)
    data = rng.uniform(0.1, 0.9, size=25)
    model = make_model(family, Sample(data), 0.1)
    x = np.linspace(0.0, 1.0, 13)
    contrib = point_contributions(model, x)
    assert contrib.shape == (13, 25)
    assert np.allclose(contrib.mean(axis=1), evaluate(model, x), rtol=1e-14)


def test_kernel_adapts_near_boundary():
    # the boundary kernel tightens toward the endpoint: its variance at
    # x=0.02 is below the interior variance at x=0.5 for h=0.2
    def kernel_variance(x, h):
        p, q = kernel_shape_params(x, h)
        return p * q / ((p + q) ** 2 * (p + q + 1.0))

    assert kernel_variance(0.02, 0.2) < kernel_variance(0.5, 0.2)


def test_reflection_mass_is_one():
    rng = np.random.default_rng(11)
    model = make_model(GAUSS_REFLECT, Sample(rng.uniform(0, 1, 60)), 0.1)
    assert total_mass(model, RULE) == pytest.approx(1.0, abs=1e-6)


def test_normalize_idempotent_and_unit_mass():
    rng = np.random.default_rng(23)
    model = make_model(BETA_F2, Sample(rng.uniform(0, 1, 50)), 0.08)
    normalized = normalize(model, RULE)
    assert total_mass(normalized, RULE) == pytest.approx(1.0, rel=1e-12)
    twice = normalize(normalized, RULE)
    assert twice.normalization == pytest.approx(normalized.normalization, rel=1e-12)
    # normalization rescales pointwise
    x = np.linspace(0.1, 0.9, 9)
    assert np.allclose(
        evaluate(normalized, x), evaluate(model, x) / normalized.normalization, rtol=1e-14
    )


def test_normalize_rejects_unusable_mass():
    model = DensityModel(BETA_F1, Sample(np.array([0.5])), h=1.0, normalization=None)
    bad = DensityModel(BETA_F1, Sample(np.array([0.5])), h=1.0, normalization=float(1e309))
    with pytest.raises(ConfigurationError):
        make_model(BETA_F1, Sample(np.array([0.5])), 1.0, normalization=-1.0)
    with pytest.raises(NumericalError):
        normalize(bad, RULE)
    assert normalize(model, RULE).normalization > 0.0


def test_sample_validation():
    with pytest.raises(DomainError):
        Sample(np.array([[0.1, 0.2]]))
    with pytest.raises(DomainError):
        Sample(np.array([]))
    with pytest.raises(DomainError):
        Sample(np.array([0.5, 1.2]))
    with pytest.raises(DomainError):
        Sample(np.array([0.5, float("nan")]))
    s = Sample(np.array([0.0, 0.5, 1.0]))
    assert s.n == 3
    with pytest.raises(ValueError):
        s.values[0] = 0.9


def test_make_model_validation():
    data = Sample(np.array([0.2, 0.8]))
    with pytest.raises(ConfigurationError):
        make_model("triweight", data, 0.1)
    with pytest.raises(ConfigurationError):
        make_model(BETA_F1, data, 0.0)
    with pytest.raises(ConfigurationError):
        make_model(BETA_F1, data, float("inf"))
    with pytest.raises(ConfigurationError):
        make_model(BETA_F2, data, 0.25)
    with pytest.raises(ConfigurationError):
        make_model(GAUSS_LOGIT, data, 0.1, clip_epsilon=0.5)
    assert make_model(BETA_F2, data, 0.2499).h == pytest.approx(0.2499)


def test_evaluation_point_domain():
    model = make_model(BETA_F1, Sample(np.array([0.5])), 0.1)
    with pytest.raises(DomainError):
        evaluate(model, -0.2)
    with pytest.raises(DomainError):
        evaluate(model, np.array([0.5, 1.5]))


def test_estimators_handle_boundary_data():
    # data exactly at 0 and 1 stay finite for every family
    data = Sample(np.array([0.0, 0.3, 1.0]))
    for family in FAMILIES:
        model = make_model(family, data, 0.1)
        out = evaluate(model, np.array([0.0, 0.25, 0.5, 1.0]))
        assert np.all(np.isfinite(out))
        assert np.all(out >= 0.0)
