import numpy as np
import pytest

from andreev import sampling as smp
from andreev.ensembles import EnsembleSpec
from andreev.quad import jacobi_rule_01


class TestHaar:
    def test_orthogonal_columns_unit_norm(self):
        rng = np.random.default_rng(0)
        Q = smp.haar_orthogonal_batch(5, 100, rng)
        norms = np.linalg.norm(Q, axis=1)
        assert np.abs(norms - 1.0).max() < 1e-12

    def test_special_orthogonal_det(self):
        rng = np.random.default_rng(1)
        S = smp.haar_special_orthogonal_batch(4, 500, rng)
        assert np.abs(np.linalg.det(S) - 1.0).max() < 1e-10

    def test_entry_second_moment(self):
        rng = np.random.default_rng(2)
        U = smp.haar_orthogonal_batch(3, 100_000, rng)
        m2 = (U[:, 0, 0] ** 2).mean()
        se = (U[:, 0, 0] ** 2).std(ddof=1) / np.sqrt(U.shape[0])
        assert abs(m2 - 1.0 / 3.0) < 3 * se

    def test_symplectic_structure(self):
        rng = np.random.default_rng(3)
        U = smp.haar_symplectic(3, rng)
        smp.ScatteringSample(U, "PQE").validate()

    def test_symplectic_kramers_degenerate_svd(self):
        rng = np.random.default_rng(4)
        U = smp.haar_symplectic_batch(2, 50, rng)
        sv = np.linalg.svd(U[:, :2, :2], compute_uv=False)
        assert np.abs(sv[:, 0] - sv[:, 1]).max() < 1e-10

    def test_dispatcher(self):
        rng = np.random.default_rng(5)
        assert smp.haar_sample("O", 3, rng).shape == (3, 3)
        assert smp.haar_sample("SO", 3, rng).shape == (3, 3)
        assert smp.haar_sample("Sp", 2, rng).shape == (4, 4)
        with pytest.raises(ValueError):
            smp.haar_sample("U", 3, rng)


class TestPoissonDensity:
    def test_gamma_zero_is_flat(self):
        rng = np.random.default_rng(6)
        spec = EnsembleSpec("PRE", 1, 2, (0.0,))
        s = smp.sample_scattering(spec, rng)
        assert smp.poisson_density(s, spec) == 1.0

    def test_identity_matrix_closed_form(self):
        spec = EnsembleSpec("PRE", 2, 2, (0.5,))
        S = np.eye(4)
        n_sigma = 3  # n + m - 1
        assert smp.poisson_density(S, spec) == pytest.approx(
            (1 - 0.5) ** (-2 * n_sigma), rel=1e-12)

    def test_full_vs_reduced(self):
        rng = np.random.default_rng(7)
        for kind, n, m in (("PRE", 2, 3), ("PQE", 1, 2)):
            spec = EnsembleSpec(kind, n, m, (0.4,))
            for _ in range(10):
                s = smp.sample_scattering(spec, rng)
                assert smp.poisson_density_full(s, spec) == pytest.approx(
                    smp.poisson_density(s, spec), rel=1e-10)


class TestReflectionEigenvalues:
    def test_identity_gives_ones(self):
        spec = EnsembleSpec("CRE", 2, 2)
        assert smp.reflection_eigenvalues(np.eye(4), spec) == pytest.approx([1.0, 1.0])

    def test_zero_reflection_block(self):
        spec = EnsembleSpec("CRE", 1, 1)
        S = np.array([[0.0, -1.0], [1.0, 0.0]])  # det +1, r-block 0
        assert smp.reflection_eigenvalues(S, spec) == pytest.approx([0.0])

    def test_unitarity_r_plus_t(self):
        rng = np.random.default_rng(8)
        spec = EnsembleSpec("CRE", 2, 3)
        for _ in range(20):
            S = smp.sample_scattering(spec, rng).matrix
            R = np.sort(smp.reflection_eigenvalues(S, spec))
            T = np.sort(np.linalg.svd(S[:2, 2:], compute_uv=False) ** 2)[::-1]
            assert np.abs(R + T - 1.0).max() < 1e-10

    def test_kramers_mismatch_raises(self):
        rng = np.random.default_rng(9)
        spec = EnsembleSpec("PQE", 1, 1, (0.3,))
        # a generic (non-symplectic) unitary has distinct singular values
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        Q, _ = np.linalg.qr(A)
        with pytest.raises(smp.KramersPairError):
            smp.reflection_eigenvalues(Q, spec)


class TestMetropolis:
    def test_gamma_zero_accepts_everything(self):
        spec = EnsembleSpec("PRE", 1, 2, (0.0,))
        cfg = smp.ChainConfig(seed=10, burn_in=50, thinning=1, samples=500)
        chain = smp.MetropolisChain(spec, cfg)
        out = list(chain)
        assert len(out) == 500
        assert chain.acceptance_rate == 1.0

    def test_mean_matches_quadrature(self):
        # E[R] for the minimal real ensemble against direct integration
        spec = EnsembleSpec("PRE", 1, 1, (0.5,))
        cfg = smp.ChainConfig(seed=11, burn_in=500, thinning=4, samples=20_000)
        R, rate = smp.reflection_samples(spec, cfg)
        assert rate > 0.3
        from andreev.ensembles import jpdf_semi_ideal

        t, w = jacobi_rule_01(80, -0.5, -0.5)
        dens = np.array([jpdf_semi_ideal(spec, [x]) for x in t])
        weight = t**0.5 * (1 - t) ** 0.5  # divide the rule's exponents back out
        mean_exact = float(np.dot(w, t * dens * weight))
        batches = R.reshape(50, -1).mean(axis=1)
        se = batches.std(ddof=1) / np.sqrt(batches.size)
        assert abs(R.mean() - mean_exact) < 3.5 * se

    def test_split_half_consistency(self):
        spec = EnsembleSpec("PRE", 2, 3, (0.3,))
        cfg = smp.ChainConfig(seed=12, burn_in=500, thinning=2, samples=20_000)
        R, rate = smp.reflection_samples(spec, cfg)
        assert rate > 0.0
        a, b = R[:10_000].mean(), R[10_000:].mean()
        se = np.sqrt(R[:10_000].mean(axis=0).var() / 5000 + 1e-12) + 0.01
        assert abs(a - b) < 3 * se

    def test_reproducible_streams(self):
        spec = EnsembleSpec("PQE", 1, 1, (0.4,))
        cfg = smp.ChainConfig(seed=13, burn_in=100, thinning=2, samples=200)
        R1, _ = smp.reflection_samples(spec, cfg)
        R2, _ = smp.reflection_samples(spec, cfg)
        assert np.array_equal(R1, R2)
        other = smp.ChainConfig(seed=13, burn_in=100, thinning=2, samples=200,
                                chain_id=1)
        R3, _ = smp.reflection_samples(spec, other)
        assert not np.array_equal(R1, R3)


class TestEmpiricalDensity:
    def test_uniform_is_flat(self):
        rng = np.random.default_rng(14)
        h = smp.empirical_density(rng.uniform(0, 1, 50_000), bins=25)
        dev = np.abs(np.asarray(h["density"]) - 1.0) / np.asarray(h["stderr"])
        assert np.mean(dev <= 3.0) >= 0.9

    def test_minimum_sample_count(self):
        with pytest.raises(ValueError):
            smp.empirical_density(np.linspace(0, 1, 10), bins=5)

    def test_cre_haar_matches_arcsine(self):
        rng = np.random.default_rng(15)
        spec = EnsembleSpec("CRE", 1, 1)
        S = smp.haar_special_orthogonal_batch(2, 40_000, rng)
        R = S[:, 0, 0] ** 2
        h = smp.empirical_density(R, bins=20)
        edges = np.asarray(h["bin_edges"])
        # analytic arcsine bin masses
        probs = np.diff(2 / np.pi * np.arcsin(np.sqrt(edges)))
        dev = np.abs(np.asarray(h["counts"]) / R.size - probs) / \
            np.sqrt(probs * (1 - probs) / R.size)
        assert np.mean(dev <= 3.0) >= 0.9

    def test_cqe_haar_matches_ideal(self):
        rng = np.random.default_rng(16)
        spec = EnsembleSpec("CQE", 1, 1)
        U = smp.haar_symplectic_batch(2, 20_000, rng)
        R = np.array([smp.reflection_eigenvalues(u, spec)[0] for u in U])
        h = smp.empirical_density(R, bins=20)
        edges = np.asarray(h["bin_edges"])
        probs = np.diff(3 * edges**2 - 2 * edges**3)  # Beta(2,2) cdf
        dev = np.abs(np.asarray(h["counts"]) / R.size - probs) / \
            np.sqrt(probs * (1 - probs) / R.size)
        assert np.mean(dev <= 3.0) >= 0.9


def test_batch_means_stderr_reduces_to_binomial_for_iid():
    rng = np.random.default_rng(17)
    R = rng.uniform(0, 1, size=(40_000, 1))
    edges = np.linspace(0, 1, 11)
    bm = smp.bin_probability_stderr(R, edges)
    binom = np.sqrt(0.1 * 0.9 / R.size)
    assert bm == pytest.approx(binom, rel=0.35)
