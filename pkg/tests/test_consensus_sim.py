import numpy as np
import pytest
from hypothesis import given, settings

from conftest import connected_graphs
from fractal_coherence.consensus_sim import (
    LYAPUNOV_MAX_NODES,
    LtiConsensusSystem,
    SimConfig,
    StabilityError,
    consensus_average_drift,
    lyapunov_h2,
    orthogonal_complement_basis,
    replicate_seeds,
    resolve_config,
    simulate_variance,
)
from fractal_coherence.generators import path, ring, star, tree_like
from fractal_coherence.graph import build_graph, laplacian
from fractal_coherence.spectral import spectrum


def test_complement_basis_is_orthonormal_and_orthogonal_to_ones():
    U = orthogonal_complement_basis(7)
    np.testing.assert_allclose(U.T @ U, np.eye(6), atol=1e-12)
    np.testing.assert_allclose(U.sum(axis=0), 0.0, atol=1e-12)


def test_system_validation():
    L = laplacian(ring(4))
    with pytest.raises(ValueError, match="order"):
        LtiConsensusSystem("third", 1.0, L)
    with pytest.raises(ValueError, match="beta"):
        LtiConsensusSystem("first", 0.0, L)


def test_state_space_matrices():
    sys2 = LtiConsensusSystem.from_graph(path(3), "second", 2.0)
    A, B, C = sys2.matrices()
    assert A.shape == (6, 6) and B.shape == (6, 3) and C.shape == (3, 6)
    assert sys2.state_dimension == 6


def test_lyapunov_two_node_path():
    # lambda = 2: H_FO = 1/(2*2*beta*2), H_SO = 1/(4*2*beta^2*2)
    for beta in (0.5, 1.0, 2.0):
        assert lyapunov_h2(LtiConsensusSystem.from_graph(path(2), "first", beta)) == pytest.approx(
            0.5 / (4 * beta), rel=1e-12
        )
        assert lyapunov_h2(LtiConsensusSystem.from_graph(path(2), "second", beta)) == pytest.approx(
            0.25 / (4 * beta**2), rel=1e-12
        )


@given(connected_graphs(max_nodes=15))
@settings(max_examples=20)
def test_lyapunov_matches_spectral_formulas(g):
    sp = spectrum(g)
    n = g.num_nodes
    for beta in (0.5, 2.0):
        h1 = lyapunov_h2(LtiConsensusSystem.from_graph(g, "first", beta))
        h2 = lyapunov_h2(LtiConsensusSystem.from_graph(g, "second", beta))
        assert h1 == pytest.approx(sp.S / (2 * beta * n), rel=1e-8)
        assert h2 == pytest.approx(sp.S2 / (2 * beta**2 * n), rel=1e-8)


def test_lyapunov_size_limit():
    with pytest.raises(ValueError, match=str(LYAPUNOV_MAX_NODES)):
        lyapunov_h2(LtiConsensusSystem.from_graph(ring(LYAPUNOV_MAX_NODES + 1), "first", 1.0))


def test_lyapunov_rejects_disconnected_laplacian():
    g = build_graph(4, [(0, 1), (2, 3)])
    with pytest.raises(StabilityError):
        lyapunov_h2(LtiConsensusSystem("first", 1.0, laplacian(g)))


def test_replicate_streams_do_not_depend_on_count():
    a = replicate_seeds(7, 3)
    b = replicate_seeds(7, 5)
    for sa, sb in zip(a, b):
        ga = np.random.Generator(np.random.PCG64(sa))
        gb = np.random.Generator(np.random.PCG64(sb))
        assert ga.standard_normal() == gb.standard_normal()


def test_resolve_config_defaults_and_guards():
    system = LtiConsensusSystem.from_graph(ring(5), "first", 1.0)
    dt, nb, nm = resolve_config(system, SimConfig())
    lam = np.linalg.eigvalsh(system.laplacian)
    assert dt == pytest.approx(0.05 / lam[-1])
    assert nm * dt >= 200 / lam[1] - dt
    with pytest.raises(StabilityError, match="reduce dt"):
        resolve_config(system, SimConfig(dt=0.2 / lam[-1]))
    with pytest.raises(ValueError, match="horizon"):
        resolve_config(system, SimConfig(horizon=1.0 / lam[1]))


def test_simulation_is_reproducible_and_seed_sensitive():
    system = LtiConsensusSystem.from_graph(star(3), "first", 1.0)
    cfg = SimConfig(replicates=4, horizon_factor=25, seed=11)
    a = simulate_variance(system, cfg)
    b = simulate_variance(system, cfg)
    assert a.h_hat == b.h_hat and a.replicate_means == b.replicate_means
    c = simulate_variance(system, SimConfig(replicates=4, horizon_factor=25, seed=12))
    assert c.h_hat != a.h_hat


def test_replicate_results_independent_of_chunking():
    system = LtiConsensusSystem.from_graph(path(3), "second", 1.0)
    a = simulate_variance(system, SimConfig(replicates=3, horizon_factor=25, chunk_steps=4096))
    b = simulate_variance(system, SimConfig(replicates=3, horizon_factor=25, chunk_steps=97))
    assert a.replicate_means == b.replicate_means


def test_noise_free_dynamics_stay_at_zero():
    system = LtiConsensusSystem.from_graph(ring(4), "second", 1.0)
    est = simulate_variance(system, SimConfig(replicates=2, horizon_factor=25, noise_scale=0.0))
    assert est.h_hat == 0.0 and est.stderr == 0.0
    assert est.z_score(0.0) == 0.0


@pytest.mark.parametrize("order", ["first", "second"])
def test_simulation_estimate_close_to_analytic(order):
    g = tree_like(1, 1)
    sp = spectrum(g)
    beta = 1.0
    analytic = sp.S / (2 * g.num_nodes) if order == "first" else sp.S2 / (2 * g.num_nodes)
    est = simulate_variance(
        LtiConsensusSystem.from_graph(g, order, beta),
        SimConfig(replicates=16, dt_factor=0.02, horizon_factor=60, seed=5),
    )
    assert abs(est.z_score(analytic)) <= 3
    assert abs(est.h_hat - analytic) / analytic <= 0.10


def test_average_is_conserved_without_noise(rng):
    system = LtiConsensusSystem.from_graph(tree_like(2, 2), "first", 1.0)
    x0 = rng.standard_normal(system.num_nodes)
    assert consensus_average_drift(system, x0, steps=200, dt=0.01) < 1e-12


def test_divergence_is_detected():
    system = LtiConsensusSystem.from_graph(path(2), "second", 1.0)
    with pytest.raises(StabilityError, match="exceeded"):
        simulate_variance(system, SimConfig(replicates=2, horizon_factor=25, overflow_guard=1e-3))
