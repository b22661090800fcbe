import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from oneshot.distributions import (
    ClassicalDistribution,
    DensityOperator,
    SequenceSpace,
    default_fold_point,
    embed_signal_with_arrival,
    iid_power,
    jittered_pulse,
    pinch,
    point_mass,
    poisson_truncated,
    random_density,
    shifted,
    tensor,
)
from oneshot.errors import CapacityError, DomainError, ValidationError


def test_sequence_indexing_roundtrip():
    space = SequenceSpace(3, 4)
    assert space.size == 81
    for idx in (0, 1, 40, 80):
        assert space.index(space.sequence(idx)) == idx
    assert space.index((0, 0, 1, 2)) == 5


def test_sequence_space_capacity():
    with pytest.raises(CapacityError):
        SequenceSpace(7, 9)


def test_distribution_validation():
    with pytest.raises(ValidationError):
        ClassicalDistribution([0.5, -0.1, 0.6])
    with pytest.raises(ValidationError):
        ClassicalDistribution([0.5, 0.4])
    p = ClassicalDistribution([0.5, 0.4], subnormalized=True)
    assert p.total == pytest.approx(0.9)
    with pytest.raises(ValidationError):
        p.require_normalized("test")


def test_distribution_is_read_only():
    p = ClassicalDistribution([0.5, 0.5])
    with pytest.raises(ValueError):
        p.mass[0] = 1.0


def test_density_validation():
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([1.2, -0.2]))
    with pytest.raises(ValidationError):
        DensityOperator([[0.5, 0.5], [0.0, 0.5]])
    rho = DensityOperator(0.5 * np.ones((2, 2)))
    assert rho.dim == 2


def test_poisson_truncation_fold():
    p = poisson_truncated(3.0, fold_point=6)
    assert p.dim == 7
    assert_allclose(p.mass[:6], stats.poisson.pmf(np.arange(6), 3.0))
    assert p.mass[6] == pytest.approx(stats.poisson.sf(5, 3.0))
    assert p.total == pytest.approx(1.0, abs=1e-14)


def test_poisson_pmf_decays():
    # Probabilities use exp(-rate); with exp(+rate) the vector could not sum to one.
    p = poisson_truncated(2.0, fold_point=10)
    assert p.mass[0] == pytest.approx(math.exp(-2.0))


def test_default_fold_point_meets_tolerance():
    k = default_fold_point(6.0, 1e-12)
    assert stats.poisson.sf(k - 1, 6.0) <= 1e-12
    assert stats.poisson.sf(k - 2, 6.0) > 1e-12


def test_shift_refolds():
    p = ClassicalDistribution([0.5, 0.3, 0.2])
    assert_allclose(shifted(p, 1).mass, [0.0, 0.5, 0.5])
    assert_allclose(shifted(p, 5).mass, [0.0, 0.0, 1.0])
    assert_allclose(shifted(p, 0).mass, p.mass)


def test_iid_power_matches_kron():
    p = ClassicalDistribution([0.2, 0.8])
    assert_allclose(iid_power(p, 3).mass, np.kron(np.kron(p.mass, p.mass), p.mass))
    rho = DensityOperator(np.array([[0.6, 0.2j], [-0.2j, 0.4]]))
    assert_allclose(iid_power(rho, 2).matrix, np.kron(rho.matrix, rho.matrix))


def test_embed_signal_mixture():
    null = ClassicalDistribution([0.9, 0.1])
    signal = point_mass(1, 2)
    mix = embed_signal_with_arrival(signal, null, [0.5, 0.5], 2)
    expected = 0.5 * np.kron([0, 1], null.mass) + 0.5 * np.kron(null.mass, [0, 1])
    assert_allclose(mix.mass, expected)
    with pytest.raises(DomainError):
        embed_signal_with_arrival(signal, null, [0.0, 0.0, 1.0], 2)


def test_embed_quantum_signal(rng):
    rho = random_density(2, rng)
    sig = random_density(2, rng)
    out = embed_signal_with_arrival(sig, rho, [1.0], 2)
    assert_allclose(out.matrix, np.kron(sig.matrix, rho.matrix))


def test_tensor_and_pinch():
    a = ClassicalDistribution([0.3, 0.7])
    b = ClassicalDistribution([0.5, 0.5])
    assert_allclose(tensor(a, b).mass, np.kron(a.mass, b.mass))
    rho = DensityOperator(0.5 * np.ones((2, 2)))
    assert_allclose(pinch(rho).mass, [0.5, 0.5])


def test_jittered_pulse_positions():
    p = jittered_pulse(3, 6, 5, 0.2)
    space = p.space
    assert p.mass[space.index((0, 0, 3, 0, 0))] == pytest.approx(0.8)
    assert p.mass[space.index((0, 3, 0, 0, 0))] == pytest.approx(0.1)
    assert p.mass[space.index((0, 0, 0, 3, 0))] == pytest.approx(0.1)
    assert jittered_pulse(0, 6, 5, 0.2).mass[0] == pytest.approx(1.0)
