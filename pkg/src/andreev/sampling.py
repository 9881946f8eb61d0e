"""Haar sampling on compact groups and Monte Carlo for the Poisson kernel.

The scattering matrix of the real ensemble is Haar on SO(n+m); the
quaternion ensemble lives in the compact symplectic group Sp(n+m),
represented throughout by its 2(n+m)-dimensional complex embedding (no
native quaternion type).  Non-ideal coupling reweights Haar by
|det(1 - gamma S)|^(-N_sigma), sampled with an independence Metropolis
chain whose proposals are exact Haar draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensembles import EnsembleSpec, ensemble_constants

__all__ = [
    "ScatteringSample",
    "ChainConfig",
    "KramersPairError",
    "haar_orthogonal",
    "haar_special_orthogonal",
    "haar_symplectic",
    "haar_sample",
    "sample_scattering",
    "poisson_log_density",
    "poisson_density",
    "poisson_density_full",
    "MetropolisChain",
    "metropolis_chain",
    "reflection_eigenvalues",
    "reflection_samples",
    "empirical_density",
]


class KramersPairError(RuntimeError):
    """Singular values of a symplectic sample failed to pair up."""


def symplectic_unit(k: int) -> np.ndarray:
    """J = 1_k (x) [[0, 1], [-1, 0]], the quaternion embedding unit."""
    J = np.zeros((2 * k, 2 * k))
    for i in range(k):
        J[2 * i, 2 * i + 1] = 1.0
        J[2 * i + 1, 2 * i] = -1.0
    return J


# ----------------------------------------------------------------------
# Haar sampling
# ----------------------------------------------------------------------

def haar_orthogonal_batch(dim: int, size: int, rng) -> np.ndarray:
    """Haar O(dim) via QR of Gaussian matrices with the sign-fixed diagonal."""
    A = rng.standard_normal((size, dim, dim))
    Q, R = np.linalg.qr(A)
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    d[d == 0.0] = 1.0
    return Q * d[:, None, :]


def haar_special_orthogonal_batch(dim: int, size: int, rng) -> np.ndarray:
    """Haar SO(dim): Haar O(dim), then flip column 0 on the det = -1 sheet."""
    Q = haar_orthogonal_batch(dim, size, rng)
    neg = np.linalg.det(Q) < 0
    Q[neg, :, 0] *= -1.0
    return Q


def haar_symplectic_batch(k: int, size: int, rng) -> np.ndarray:
    """Haar Sp(k) as 2k x 2k complex embeddings.

    A complex Gaussian is projected onto the quaternion algebra
    (M = (A - J conj(A) J)/2 satisfies M = -J conj(M) J) and then
    Gram-Schmidt runs over quaternion column pairs with positive real
    normalization, which makes the QR factorization unique.
    """
    dim = 2 * k
    A = rng.standard_normal((size, dim, dim)) + 1j * rng.standard_normal((size, dim, dim))
    J = symplectic_unit(k)
    M = 0.5 * (A - J @ A.conj() @ J)
    for c in range(k):
        V = M[:, :, 2 * c:2 * c + 2]
        for p in range(c):
            U = M[:, :, 2 * p:2 * p + 2]
            proj = np.einsum("sij,sik->sjk", U.conj(), V)
            V = V - np.einsum("sij,sjk->sik", U, proj)
        norm = np.sqrt(0.5 * np.einsum("sij,sij->s", V.conj(), V).real)
        M[:, :, 2 * c:2 * c + 2] = V / norm[:, None, None]
    return M


def haar_orthogonal(dim: int, rng) -> np.ndarray:
    return haar_orthogonal_batch(dim, 1, rng)[0]


def haar_special_orthogonal(dim: int, rng) -> np.ndarray:
    return haar_special_orthogonal_batch(dim, 1, rng)[0]


def haar_symplectic(k: int, rng) -> np.ndarray:
    return haar_symplectic_batch(k, 1, rng)[0]


def haar_sample(group: str, dim: int, rng) -> np.ndarray:
    """One Haar draw from 'O', 'SO' (matrix dim) or 'Sp' (quaternion dim)."""
    if group == "O":
        return haar_orthogonal(dim, rng)
    if group == "SO":
        return haar_special_orthogonal(dim, rng)
    if group == "Sp":
        return haar_symplectic(dim, rng)
    raise ValueError(f"unknown group {group!r}")


@dataclass(frozen=True)
class ScatteringSample:
    """One scattering matrix with its ensemble kind."""

    matrix: np.ndarray
    kind: str

    def validate(self, tol: float = 1e-10) -> None:
        S = self.matrix
        dim = S.shape[0]
        err = np.abs(S.conj().T @ S - np.eye(dim)).max()
        if err > tol:
            raise ValueError(f"not unitary: |S^H S - 1| = {err:.2e}")
        if self.kind in ("CRE", "PRE"):
            if abs(np.linalg.det(S) - 1.0) > tol:
                raise ValueError("real-kind scattering matrix must have det +1")
        else:
            J = symplectic_unit(dim // 2)
            err = np.abs(J @ S.conj() @ J + S).max()  # S = -J conj(S) J
            if err > tol:
                raise ValueError(f"quaternion structure broken: {err:.2e}")


def sample_scattering(spec: EnsembleSpec, rng) -> ScatteringSample:
    """One Haar scattering matrix of the right group for the spec's kind."""
    return ScatteringSample(_scattering_batch(spec, 1, rng)[0], spec.kind)


def _scattering_batch(spec: EnsembleSpec, size: int, rng) -> np.ndarray:
    dim = spec.n + spec.m
    if spec.is_quaternion:
        return haar_symplectic_batch(dim, size, rng)
    return haar_special_orthogonal_batch(dim, size, rng)


# ----------------------------------------------------------------------
# Poisson kernel
# ----------------------------------------------------------------------

def _gamma_left(spec: EnsembleSpec) -> np.ndarray:
    """Left-lead coupling on the reflection block (Kramers-doubled for PQE)."""
    g = np.asarray(spec.gamma, dtype=float)
    if spec.is_quaternion:
        g = np.repeat(g, 2)
    return g


def _r_block_dim(spec: EnsembleSpec) -> int:
    return 2 * spec.n if spec.is_quaternion else spec.n


def poisson_log_density(S, spec: EnsembleSpec) -> float:
    """log of the unnormalized Poisson kernel |det(1 - gamma_L r)|^(-N_sigma).

    Since the right lead is ideal the kernel depends on the reflection
    block alone; `S` may be the full matrix or just that block.
    """
    S = S.matrix if isinstance(S, ScatteringSample) else np.asarray(S)
    k = _r_block_dim(spec)
    r = S[:k, :k]
    g = _gamma_left(spec)
    _, logdet = np.linalg.slogdet(np.eye(k) - g[:, None] * r)
    return -float(ensemble_constants(spec).N_sigma) * float(logdet)


def poisson_density(S, spec: EnsembleSpec) -> float:
    return float(np.exp(poisson_log_density(S, spec)))


def poisson_density_full(S, spec: EnsembleSpec) -> float:
    """Same kernel evaluated from the full matrix with gamma embedded as
    diag(gamma_L, 0): a self-consistency route for tests."""
    S = S.matrix if isinstance(S, ScatteringSample) else np.asarray(S)
    dim = S.shape[0]
    g_full = np.zeros(dim)
    g_left = _gamma_left(spec)
    g_full[: g_left.size] = g_left
    _, logdet = np.linalg.slogdet(np.eye(dim) - g_full[:, None] * S)
    return float(np.exp(-float(ensemble_constants(spec).N_sigma) * logdet))


def _batch_log_density(r_blocks: np.ndarray, spec: EnsembleSpec) -> np.ndarray:
    g = _gamma_left(spec)
    k = g.size
    if r_blocks.shape[-1] != k:
        raise ValueError("pass reflection blocks of the coupled channels only")
    _, logdet = np.linalg.slogdet(np.eye(k) - g[:, None] * r_blocks)
    return -float(ensemble_constants(spec).N_sigma) * logdet


# ----------------------------------------------------------------------
# Metropolis chain
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ChainConfig:
    """Independence-Metropolis run lengths and the RNG stream key."""

    seed: int = 0
    burn_in: int = 1000
    thinning: int = 1
    samples: int = 10000
    chain_id: int = 0
    proposal_block: int = 4096

    def __post_init__(self):
        if self.burn_in < 0 or self.samples <= 0 or self.thinning < 1:
            raise ValueError("invalid chain configuration")


class MetropolisChain:
    """Independence Metropolis over scattering matrices.

    Proposals are exact Haar draws, so the acceptance ratio is just the
    ratio of Poisson kernels (a small determinant).  gamma = 0 accepts
    every proposal and the output is exact Haar.  Mixing degrades as
    gamma -> 1; that regime needs longer chains.
    """

    def __init__(self, spec: EnsembleSpec, config: ChainConfig):
        self.spec = spec
        self.config = config
        self.rng = np.random.default_rng([config.seed, config.chain_id])
        self.proposed = 0
        self.accepted = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else float("nan")

    def _blocks(self):
        k = _r_block_dim(self.spec)
        while True:
            S = _scattering_batch(self.spec, self.config.proposal_block, self.rng)
            logp = _batch_log_density(S[:, :k, :k], self.spec)
            logu = np.log(self.rng.random(self.config.proposal_block))
            yield S, logp, logu

    def __iter__(self):
        cfg = self.config
        total = cfg.burn_in + cfg.thinning * cfg.samples
        current = None
        current_logp = -np.inf
        emitted = 0
        step = 0
        for S, logp, logu in self._blocks():
            for i in range(len(logp)):
                if step >= total:
                    return
                self.proposed += 1
                if current is None or logu[i] < logp[i] - current_logp:
                    current = S[i]
                    current_logp = logp[i]
                    self.accepted += 1
                step += 1
                if step > cfg.burn_in and (step - cfg.burn_in) % cfg.thinning == 0:
                    emitted += 1
                    yield ScatteringSample(current, self.spec.kind)
                    if emitted >= cfg.samples:
                        return


def metropolis_chain(spec: EnsembleSpec, config: ChainConfig):
    """Iterator of post-burn-in, thinned ScatteringSamples."""
    return MetropolisChain(spec, config)


# ----------------------------------------------------------------------
# Reflection eigenvalues
# ----------------------------------------------------------------------

def reflection_eigenvalues(S, spec: EnsembleSpec, pair_tol: float = 1e-8) -> np.ndarray:
    """R_j: squared singular values of the reflection block.

    Quaternion samples carry Kramers-degenerate singular values; adjacent
    pairs are averaged down to n values and a pairing gap above `pair_tol`
    raises KramersPairError (it signals a malformed symplectic sample).
    """
    S = S.matrix if isinstance(S, ScatteringSample) else np.asarray(S)
    k = _r_block_dim(spec)
    s = np.linalg.svd(S[:k, :k], compute_uv=False)
    if spec.is_quaternion:
        s = np.sort(s)[::-1]
        gaps = np.abs(s[0::2] - s[1::2])
        if np.any(gaps > pair_tol):
            raise KramersPairError(f"Kramers pairing gap {gaps.max():.2e} > {pair_tol}")
        s = 0.5 * (s[0::2] + s[1::2])
    return np.clip(s, 0.0, 1.0) ** 2


def reflection_samples(spec: EnsembleSpec, config: ChainConfig):
    """Run one chain and return (R array of shape (samples, n), acceptance)."""
    chain = MetropolisChain(spec, config)
    kept = np.empty((config.samples, _r_block_dim(spec), _r_block_dim(spec)),
                    dtype=complex if spec.is_quaternion else float)
    for i, sample in enumerate(chain):
        k = _r_block_dim(spec)
        kept[i] = sample.matrix[:k, :k]
    s = np.linalg.svd(kept, compute_uv=False)
    if spec.is_quaternion:
        s = -np.sort(-s, axis=1)
        gaps = np.abs(s[:, 0::2] - s[:, 1::2])
        if np.any(gaps > 1e-8):
            raise KramersPairError(f"Kramers pairing gap {gaps.max():.2e}")
        s = 0.5 * (s[:, 0::2] + s[:, 1::2])
    return np.clip(s, 0.0, 1.0) ** 2, chain.acceptance_rate


# ----------------------------------------------------------------------
# Histograms
# ----------------------------------------------------------------------

def bin_probability_stderr(R_samples: np.ndarray, edges: np.ndarray,
                           n_batches: int = 200) -> np.ndarray:
    """Per-bin standard error of the empirical bin probability.

    Batch means over the sample order: the honest Monte Carlo error for
    correlated Metropolis output, reducing to the binomial formula when
    the input is independent.
    """
    R_samples = np.asarray(R_samples, dtype=float)
    flat = R_samples.reshape(R_samples.shape[0], -1)
    n_batches = max(2, min(n_batches, flat.shape[0] // 20))
    length = flat.shape[0] // n_batches
    props = np.empty((n_batches, len(edges) - 1))
    for b in range(n_batches):
        chunk = flat[b * length:(b + 1) * length].reshape(-1)
        counts, _ = np.histogram(chunk, bins=edges)
        props[b] = counts / chunk.size
    return props.std(axis=0, ddof=1) / np.sqrt(n_batches)


def empirical_density(R_samples, bins: int = 40, support=(0.0, 1.0)) -> dict:
    """Pooled single-eigenvalue marginal as a normalized histogram.

    Returns bin edges, raw counts, the density estimate and its per-bin
    standard error (binomial, on the pooled eigenvalue count).
    """
    pooled = np.asarray(R_samples, dtype=float).reshape(-1)
    if pooled.size < 1000:
        raise ValueError("empirical_density expects at least 1000 values")
    counts, edges = np.histogram(pooled, bins=bins, range=support)
    total = pooled.size
    widths = np.diff(edges)
    p_hat = counts / total
    density = p_hat / widths
    stderr = np.sqrt(np.clip(p_hat * (1.0 - p_hat), 0.0, None) / total) / widths
    return {
        "bin_edges": edges.tolist(),
        "counts": counts.tolist(),
        "density": density.tolist(),
        "stderr": stderr.tolist(),
    }
