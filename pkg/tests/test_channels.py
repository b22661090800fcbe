import numpy as np
import pytest
from numpy.testing import assert_allclose

from oneshot.channels import (
    MatrixChannel,
    QuantumChannel,
    adjoint_apply,
    apply,
    compose,
    identity_channel,
    lift,
    loss_map,
    pinching_channel,
    random_kraus_channel,
    random_substochastic,
    saturating_add_map,
    truncate_projection,
    uniform_mix_map,
)
from oneshot.decision import DecisionFunction
from oneshot.distributions import ClassicalDistribution, DensityOperator, jittered_pulse, random_density
from oneshot.errors import DomainError, ValidationError


def test_loss_and_saturation_maps():
    loss = loss_map(2, 4)
    assert_allclose(loss.apply_vector(np.eye(5)[3]), np.eye(5)[1])
    assert_allclose(loss.apply_vector(np.eye(5)[1]), np.eye(5)[0])
    sat = saturating_add_map(3, 4)
    assert_allclose(sat.apply_vector(np.eye(5)[3]), np.eye(5)[4])
    assert sat.stochastic and loss.stochastic


def test_uniform_mix():
    mix = uniform_mix_map(0.2, 4)
    out = mix.apply_vector(np.array([1.0, 0, 0, 0]))
    assert_allclose(out, [0.85, 0.05, 0.05, 0.05])
    assert_allclose(mix.matrix() @ [1.0, 0, 0, 0], out)
    with pytest.raises(DomainError):
        uniform_mix_map(0.0, 4)
    # delta = 1 replaces every input by the uniform distribution.
    assert_allclose(uniform_mix_map(1.0, 4).apply_vector(np.eye(4)[2]), np.full(4, 0.25))


def test_slotwise_matches_kron(rng):
    per = random_substochastic(3, 3, rng)
    chan = lift(per, 3)
    dense = np.kron(np.kron(per.matrix(), per.matrix()), per.matrix())
    v = rng.random(27)
    assert_allclose(chan.apply_vector(v), dense @ v, atol=1e-14)
    assert_allclose(chan.adjoint_vector(v), dense.T @ v, atol=1e-14)
    assert_allclose(chan.column_sums(), dense.sum(axis=0), atol=1e-14)


def test_laser_stack_moves_pulse():
    g, n = 6, 5
    stack = compose(lift(saturating_add_map(1, g), n), lift(loss_map(1, g), n))
    out = apply(stack, jittered_pulse(3, g, n, 0.2))
    space = out.space
    assert out[(1, 1, 3, 1, 1)] == pytest.approx(0.8)
    assert out[(1, 3, 1, 1, 1)] == pytest.approx(0.1)
    assert out.total == pytest.approx(1.0)
    assert space.length == n


def test_projection_flags_subnormalized():
    p = ClassicalDistribution([0.5, 0.3, 0.2])
    out = apply(truncate_projection(lambda y: y < 2, dim=3), p)
    assert out.subnormalized
    assert_allclose(out.mass, [0.5, 0.3, 0.0])


def test_column_sum_validation():
    with pytest.raises(ValidationError):
        MatrixChannel([[0.8, 0.5], [0.3, 0.5]])


def test_adjoint_duality(rng):
    chan = random_substochastic(4, 3, rng)
    p = ClassicalDistribution(rng.dirichlet(np.ones(4)))
    a = DecisionFunction.classical(rng.random(3))
    lhs = apply(chan, p).mass @ a.values
    rhs = p.mass @ adjoint_apply(chan, a).values
    assert lhs == pytest.approx(rhs, abs=1e-14)


def test_quantum_channel_trace_and_adjoint(rng):
    chan = random_kraus_channel(3, 2, rng, n_ops=3, trace_preserving=True)
    assert chan.trace_preserving
    rho = random_density(3, rng)
    out = apply(chan, rho)
    assert out.trace == pytest.approx(1.0, abs=1e-12)
    a = DecisionFunction.quantum(np.diag([0.3, 0.9]))
    lhs = np.trace(out.matrix @ a.operator()).real
    rhs = np.trace(rho.matrix @ adjoint_apply(chan, a).operator()).real
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_trace_non_increasing_kraus(rng):
    chan = random_kraus_channel(2, 2, rng)
    out = apply(chan, random_density(2, rng))
    assert out.trace <= 1 + 1e-12
    with pytest.raises(ValidationError):
        QuantumChannel([np.eye(2), np.eye(2)])


def test_pinching_removes_coherence():
    rho = DensityOperator(0.5 * np.ones((2, 2)))
    assert_allclose(apply(pinching_channel(2), rho).matrix, 0.5 * np.eye(2))


def test_kind_mismatch():
    with pytest.raises(ValidationError):
        apply(identity_channel(2), DensityOperator(np.eye(2) / 2))
    with pytest.raises(ValidationError):
        compose(pinching_channel(2), identity_channel(2))
