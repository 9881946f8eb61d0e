"""Reflection-eigenvalue densities for ideal and semi-non-ideal Andreev dots.

Kinds: CRE / CQE are the circular (ideal-coupling) real and quaternion
ensembles; PRE / PQE are their Poisson-kernel generalizations where the
left lead couples through gamma_j in [0, 1).  The density of the n
reflection eigenvalues R in [0,1]^n is

    |Delta(R)|^(2/alpha) * prod (1-R_j)^((m-n+1)/alpha - 1) R_j^(eta/2)

times, for the Poisson ensembles, a hypergeometric factor of matrix
argument, normalized in closed form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .hypergeom import TruncationPolicy, hfma1, hfma2, selberg_base
from .quad import vandermonde_power

__all__ = [
    "EnsembleSpec",
    "EnsembleConstants",
    "ensemble_constants",
    "ideal_normalization",
    "jpdf_ideal",
    "jpdf_semi_ideal",
    "normalization_constant",
]

KINDS = ("CRE", "CQE", "PRE", "PQE")
_REAL_KINDS = ("CRE", "PRE")
_QUATERNION_KINDS = ("CQE", "PQE")


@dataclass(frozen=True)
class EnsembleSpec:
    """Channel counts and lead couplings of one Andreev dot ensemble.

    n left channels (the reflection block is n x n), m >= n right channels,
    gamma the diagonal of the left-lead coupling (all zero for CRE/CQE).
    """

    kind: str
    n: int
    m: int
    gamma: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (1 <= self.n <= self.m):
            raise ValueError(f"need 1 <= n <= m, got n={self.n}, m={self.m}")
        g = tuple(float(x) for x in np.atleast_1d(np.asarray(self.gamma, dtype=float))) \
            if np.size(self.gamma) else ()
        if self.kind in ("CRE", "CQE"):
            if any(x != 0.0 for x in g):
                raise ValueError("circular ensembles have gamma = 0")
            g = (0.0,) * self.n
        else:
            if len(g) == 1:
                g = g * self.n
            if len(g) != self.n:
                raise ValueError(f"gamma must have length n={self.n}, got {len(g)}")
            if any(not (0.0 <= x < 1.0) for x in g):
                raise ValueError("gamma entries must lie in [0, 1)")
        object.__setattr__(self, "gamma", g)

    @property
    def is_quaternion(self) -> bool:
        return self.kind in _QUATERNION_KINDS

    @property
    def scalar_gamma(self) -> bool:
        return len(set(self.gamma)) == 1

    def to_json(self) -> str:
        return json.dumps({"kind": self.kind, "n": self.n, "m": self.m,
                           "gamma": list(self.gamma)})

    @classmethod
    def from_json(cls, text: str) -> "EnsembleSpec":
        data = json.loads(text) if isinstance(text, str) else text
        return cls(kind=data["kind"], n=int(data["n"]), m=int(data["m"]),
                   gamma=tuple(data.get("gamma", ()) or ()))


@dataclass(frozen=True)
class EnsembleConstants:
    """Symmetry-class parameters attached to an ensemble kind."""

    alpha: Fraction
    beta: int
    eta: int
    degeneracy: int
    sigma: int
    N: int
    N_sigma: int


def ensemble_constants(spec: EnsembleSpec) -> EnsembleConstants:
    """alpha/beta/eta/d/sigma and the matrix dimension N, N_sigma = N + sigma."""
    if spec.kind in _REAL_KINDS:
        N = spec.n + spec.m
        return EnsembleConstants(alpha=Fraction(2), beta=1, eta=-1, degeneracy=1,
                                 sigma=-1, N=N, N_sigma=N - 1)
    N = 2 * (spec.n + spec.m)
    return EnsembleConstants(alpha=Fraction(1, 2), beta=4, eta=2, degeneracy=4,
                             sigma=1, N=N, N_sigma=N + 1)


def _check_spectrum(spec: EnsembleSpec, R) -> np.ndarray:
    R = np.asarray(R, dtype=float).reshape(-1)
    if R.size != spec.n:
        raise ValueError(f"expected {spec.n} reflection eigenvalues, got {R.size}")
    if np.any(R < 0.0) or np.any(R > 1.0):
        raise ValueError("reflection eigenvalues must lie in [0, 1]")
    return R


def _log_prefactor(spec: EnsembleSpec, R: np.ndarray) -> float:
    """log of prod (1-R)^((m-n+1)/alpha - 1) R^(eta/2) |Delta(R)|^(2/alpha).

    The (1-R_j) power uses the positive branch; with the eta of these
    ensembles the exponents can be half-integer, where only that branch
    keeps the density real.
    """
    c = ensemble_constants(spec)
    inv_alpha = 1.0 / float(c.alpha)
    y_exp = inv_alpha * (spec.m - spec.n + 1) - 1.0
    x_exp = c.eta / 2.0
    with np.errstate(divide="ignore"):
        log = float(np.sum(y_exp * np.log1p(-R) + x_exp * np.log(R)))
    beta = int(round(2 * inv_alpha))
    vand = vandermonde_power(R[None, :], beta)[0]
    if vand == 0.0:
        return -np.inf
    return log + float(np.log(vand))


def ideal_normalization(spec: EnsembleSpec) -> float:
    """C_n: the Selberg integral of the ideal-ensemble weight."""
    c = ensemble_constants(spec)
    inv_alpha = 1.0 / float(c.alpha)
    return selberg_base(c.eta / 2.0, inv_alpha * (spec.m - spec.n + 1) - 1.0,
                        c.alpha, spec.n)


def jpdf_ideal(spec: EnsembleSpec, R) -> float:
    """Normalized density of the ideal (CRE/CQE) reflection eigenvalues."""
    if spec.kind not in ("CRE", "CQE"):
        raise ValueError("jpdf_ideal is for CRE/CQE; use jpdf_semi_ideal")
    R = _check_spectrum(spec, R)
    log = _log_prefactor(spec, R)
    if log == -np.inf:
        return 0.0
    return float(np.exp(log) / ideal_normalization(spec))


def hfma_parameters(spec: EnsembleSpec) -> tuple[float, float, float]:
    """(a, b, c) of the hypergeometric factor: ((m+n)/alpha, a + eta/2, n/alpha)."""
    c = ensemble_constants(spec)
    inv_alpha = 1.0 / float(c.alpha)
    a = (spec.m + spec.n) * inv_alpha
    return a, a + c.eta / 2.0, spec.n * inv_alpha


def jpdf_semi_ideal(spec: EnsembleSpec, R, policy: TruncationPolicy | None = None) -> float:
    """Normalized density of the PRE/PQE reflection eigenvalues.

    Scalar coupling routes through the one-matrix-argument series in
    gamma^2 R; distinct couplings use the two-argument series in
    (gamma^2, R).
    """
    if spec.kind not in ("PRE", "PQE"):
        raise ValueError("jpdf_semi_ideal is for PRE/PQE; use jpdf_ideal")
    R = _check_spectrum(spec, R)
    c = ensemble_constants(spec)
    a, b, cc = hfma_parameters(spec)
    log = _log_prefactor(spec, R)
    if log == -np.inf:
        return 0.0
    g = np.asarray(spec.gamma)
    if spec.scalar_gamma:
        series = hfma1(a, b, cc, c.alpha, g[0] ** 2 * R, policy)
    else:
        series = hfma2(a, b, cc, c.alpha, g**2, R, policy)
    return float(np.exp(log) * series.value / normalization_constant(spec))


def normalization_constant(spec: EnsembleSpec) -> float:
    """C(gamma) = C_n * prod_j (1 - gamma_j^2)^-((m+n)/alpha + eta/2).

    For the quaternion kind this product over the n couplings equals the
    Kramers-doubled determinant form det(1 - gamma^2 x 1_2)^-(N/2 + 1/2).
    """
    if spec.kind not in ("PRE", "PQE"):
        raise ValueError("normalization_constant is for PRE/PQE")
    _, b, _ = hfma_parameters(spec)
    g2 = np.asarray(spec.gamma) ** 2
    return float(ideal_normalization(spec) * np.prod((1.0 - g2) ** (-b)))


# ----------------------------------------------------------------------
# quadrature of the density: normalization checks, marginals, bin masses
# ----------------------------------------------------------------------

def _series_on_grid(spec: EnsembleSpec, R_grid: np.ndarray,
                    policy: TruncationPolicy | None) -> np.ndarray:
    """Hypergeometric factor at each spectrum in R_grid (shape (batch, n))."""
    from .hypergeom import hfma1_batch

    if spec.kind in ("CRE", "CQE") or all(g == 0.0 for g in spec.gamma):
        return np.ones(R_grid.shape[0])
    a, b, cc = hfma_parameters(spec)
    alpha = ensemble_constants(spec).alpha
    if not spec.scalar_gamma:
        from .hypergeom import hfma2

        return np.array([
            hfma2(a, b, cc, alpha, np.asarray(spec.gamma) ** 2, row, policy).value
            for row in R_grid
        ])
    return hfma1_batch(a, b, cc, alpha, spec.gamma[0] ** 2 * R_grid, policy)


def _grid_density(spec: EnsembleSpec, R_grid: np.ndarray,
                  policy: TruncationPolicy | None,
                  include_weight: bool) -> np.ndarray:
    """Density factors on a grid; `include_weight` keeps the R/(1-R) powers
    and Vandermonde (False when the quadrature rule already carries them)."""
    c = ensemble_constants(spec)
    series = _series_on_grid(spec, R_grid, policy)
    out = series
    if include_weight:
        inv_alpha = 1.0 / float(c.alpha)
        y_exp = inv_alpha * (spec.m - spec.n + 1) - 1.0
        x_exp = c.eta / 2.0
        w = np.prod(R_grid**x_exp * (1.0 - R_grid) ** y_exp, axis=1)
        out = out * w * vandermonde_power(R_grid, int(round(2 * inv_alpha)))
    if spec.kind in ("PRE", "PQE"):
        out = out / normalization_constant(spec)
    else:
        out = out / ideal_normalization(spec)
    return out


def jpdf_integral(spec: EnsembleSpec, policy: TruncationPolicy | None = None,
                  m_nodes: int = 80) -> float:
    """int of the normalized density over [0,1]^n by quadrature (n <= 2).

    Should be 1; the deviation measures the closed-form normalization
    against direct integration.  Real kinds substitute R = sin^2(theta) to
    absorb the half-integer endpoint exponents, then integrate the ordered
    simplex; quaternion kinds use tensor Gauss-Jacobi.
    """
    from .quad import jacobi_rule_01, selberg_quadrature

    c = ensemble_constants(spec)
    inv_alpha = 1.0 / float(c.alpha)
    y_exp = inv_alpha * (spec.m - spec.n + 1) - 1.0
    x_exp = c.eta / 2.0
    n = spec.n
    if n == 1:
        t, w = jacobi_rule_01(m_nodes, x_exp, y_exp)
        vals = _grid_density(spec, t[:, None], policy, include_weight=False)
        return float(np.dot(w, vals))
    if n == 2 and not spec.is_quaternion:
        # R = sin^2 theta on the ordered simplex 0 < th1 < th2 < pi/2;
        # each variable contributes 2 cos(th)^(2y+1) sin(th)^(2x+1).
        from numpy.polynomial.legendre import leggauss

        x01, w01 = leggauss(m_nodes)
        x01 = 0.5 * (x01 + 1.0)
        w01 = 0.5 * w01
        th2 = 0.5 * np.pi * x01
        w2 = 0.5 * np.pi * w01
        total = 0.0
        for t2, wt2 in zip(th2, w2):
            th1 = t2 * x01
            w1 = t2 * w01
            R2 = np.sin(t2) ** 2
            R1 = np.sin(th1) ** 2
            grid = np.column_stack([R1, np.full_like(R1, R2)])
            series = _grid_density(spec, grid, policy, include_weight=False)
            f = (
                4.0
                * (np.cos(th1) ** (2 * y_exp + 1) * np.sin(th1) ** (2 * x_exp + 1))
                * (np.cos(t2) ** (2 * y_exp + 1) * np.sin(t2) ** (2 * x_exp + 1))
                * np.abs(R2 - R1)
                * series
            )
            total += wt2 * np.dot(w1, f)
        return float(2.0 * total)  # ordered simplex x 2!
    if n == 2 and spec.is_quaternion:
        def f(T):
            return _grid_density(spec, T, policy, include_weight=False)

        return selberg_quadrature(2, x_exp, y_exp, 4, f, m=m_nodes)
    raise ValueError("jpdf_integral implemented for n <= 2")


def marginal_density(spec: EnsembleSpec, r: np.ndarray,
                     policy: TruncationPolicy | None = None,
                     m_nodes: int = 60) -> np.ndarray:
    """Single-eigenvalue marginal at points r (n <= 2).

    n = 1 is the density itself; n = 2 integrates out the partner
    eigenvalue with a rule matched to its endpoint exponents.
    """
    from .quad import jacobi_rule_01

    r = np.atleast_1d(np.asarray(r, dtype=float))
    c = ensemble_constants(spec)
    inv_alpha = 1.0 / float(c.alpha)
    y_exp = inv_alpha * (spec.m - spec.n + 1) - 1.0
    x_exp = c.eta / 2.0
    beta = int(round(2 * inv_alpha))
    if spec.n == 1:
        grid = r[:, None]
        vals = _grid_density(spec, grid, policy, include_weight=False)
        return vals * r**x_exp * (1.0 - r) ** y_exp
    if spec.n != 2:
        raise ValueError("marginal_density implemented for n <= 2")
    t, w = jacobi_rule_01(m_nodes, x_exp, y_exp)
    out = np.empty_like(r)
    for i, ri in enumerate(r):
        grid = np.column_stack([np.full_like(t, ri), t])
        series = _grid_density(spec, grid, policy, include_weight=False)
        integrand = np.abs(t - ri) ** beta * series
        out[i] = ri**x_exp * (1.0 - ri) ** y_exp * np.dot(w, integrand)
    return out


def analytic_bin_probabilities(spec: EnsembleSpec, edges,
                               policy: TruncationPolicy | None = None,
                               m_nodes: int = 32) -> np.ndarray:
    """Probability mass of the single-eigenvalue marginal per histogram bin.

    Bins touching an endpoint use a Gauss-Jacobi rule carrying that
    endpoint's exponent; interior bins use plain Gauss-Legendre.
    """
    from .quad import jacobi_rule_01

    edges = np.asarray(edges, dtype=float)
    c = ensemble_constants(spec)
    inv_alpha = 1.0 / float(c.alpha)
    y_exp = inv_alpha * (spec.m - spec.n + 1) - 1.0
    x_exp = c.eta / 2.0

    def marginal_smooth(r):
        # marginal with the R^x (1-R)^y weight of the *observed* eigenvalue
        # divided out, so bin rules can carry those exponents exactly
        full = marginal_density(spec, r, policy)
        return full / (r**x_exp * (1.0 - r) ** y_exp)

    probs = np.empty(edges.size - 1)
    for k in range(edges.size - 1):
        lo, hi = edges[k], edges[k + 1]
        width = hi - lo
        a_exp = x_exp if lo == 0.0 else 0.0
        b_exp = y_exp if hi == 1.0 else 0.0
        t, w = jacobi_rule_01(m_nodes, a_exp, b_exp)
        r = lo + width * t
        scale = width ** (a_exp + b_exp + 1.0)
        carry = np.ones_like(r)
        if lo != 0.0:
            carry = carry * r**x_exp
        if hi != 1.0:
            carry = carry * (1.0 - r) ** y_exp
        probs[k] = scale * np.dot(w, carry * marginal_smooth(r))
    return probs
