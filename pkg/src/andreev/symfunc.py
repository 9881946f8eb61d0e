"""Jack and Schur polynomials, generalized Pochhammer symbols, hook products.

The Jack index alpha is a positive rational (1/2, 1 and 2 are the values tied
to the quaternion, unitary and orthogonal symmetry classes).  Everything here
has two arithmetic modes: exact ``fractions.Fraction`` (used by the identity
suite) and plain floats (used by series evaluation, where speed matters).

Jack polynomials are evaluated through their expansion in monomial symmetric
functions.  The expansion coefficients come from the eigenfunction recursion
in dominance order and are memoized per (partition, alpha, variable count).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import numpy as np

from .partitions import as_partition, dominates, partitions_of

__all__ = [
    "as_alpha",
    "gen_pochhammer",
    "HookCoefficients",
    "hook_coefficients",
    "jack_monomial_coefficients",
    "jack_eval",
    "jack_eval_batch",
    "jack_at_identity",
    "schur_eval",
    "schur_eval_batch",
    "schur_at_identity",
]


def as_alpha(alpha) -> Fraction:
    """Coerce the Jack index to an exact positive Fraction."""
    a = Fraction(alpha)
    if a <= 0:
        raise ValueError(f"Jack index must be positive, got {alpha}")
    return a


# ----------------------------------------------------------------------
# generalized Pochhammer symbol and hook-type products
# ----------------------------------------------------------------------

def gen_pochhammer(u, lam, alpha, exact: bool = False):
    """[u]_lam^(alpha) = prod_j prod_{k=0}^{lam_j - 1} (u - (j-1)/alpha + k).

    Computed as a finite product of linear factors, never as Gamma ratios,
    so a vanishing rising factor gives an exact 0 instead of a pole.
    """
    lam = as_partition(lam)
    a = as_alpha(alpha)
    if exact:
        u = Fraction(u)
        total = Fraction(1)
        shift = Fraction(1) / a
    else:
        u = float(u)
        total = 1.0
        shift = 1.0 / float(a)
    for j, p in enumerate(lam.parts):
        base = u - j * shift
        for k in range(p):
            total *= base + k
    return total


@dataclass(frozen=True)
class HookCoefficients:
    """The six cell products attached to a partition.

    d and d_prime use (arm, leg), h uses the alpha-deformed hook length,
    e, e_prime and b use (coarm, coleg) and carry the variable count n.
    """

    d: object
    d_prime: object
    e: object
    e_prime: object
    h: object
    b: object


def hook_coefficients(lam, alpha, n, exact: bool = False) -> HookCoefficients:
    """Cell products over the diagram of lam at Jack index alpha:

    d  = prod(alpha*a + alpha + l + 1)     d' = prod(alpha*a + alpha + l)
    e  = prod(alpha*a' + alpha + n - l')   e' = prod(alpha*a' + alpha + n - l' - 1)
    h  = prod(alpha*a + l + 1)             b  = prod(alpha*a' + n - l')
    """
    lam = as_partition(lam)
    a = as_alpha(alpha)
    if exact:
        one = Fraction(1)
        al = a
        n = Fraction(n)
    else:
        one = 1.0
        al = float(a)
        n = float(n)
    d = dp = e = ep = h = b = one
    conj = lam.conjugate()
    for i, p in enumerate(lam.parts, start=1):
        for j in range(1, p + 1):
            arm = p - j
            leg = conj.parts[j - 1] - i
            coarm = j - 1
            coleg = i - 1
            d *= al * arm + al + leg + 1
            dp *= al * arm + al + leg
            e *= al * coarm + al + n - coleg
            ep *= al * coarm + al + n - coleg - 1
            h *= al * arm + leg + 1
            b *= al * coarm + n - coleg
    return HookCoefficients(d=d, d_prime=dp, e=e, e_prime=ep, h=h, b=b)


# ----------------------------------------------------------------------
# Jack monomial-expansion tables
# ----------------------------------------------------------------------

def _rho(parts: tuple, alpha: Fraction) -> Fraction:
    """Eigenvalue of the dominance recursion; strictly monotone in dominance."""
    two_over_a = Fraction(2) / alpha
    return sum(
        Fraction(p) * (Fraction(p) - 1 - two_over_a * i) for i, p in enumerate(parts)
    )


_TABLE_CACHE: dict = {}
_TABLE_LOCK = threading.Lock()


def jack_monomial_coefficients(lam, alpha, max_length: int | None = None,
                               exact: bool = False) -> dict:
    """Coefficients c_mu of P_lam^(alpha) = sum_mu c_mu m_mu, c_lam = 1.

    Only coefficients for mu with length <= max_length are produced (they are
    the only ones that survive evaluation in max_length variables, and the
    recursion is closed on that subset).  Results are memoized process-wide;
    concurrent inserts are idempotent.
    """
    lam = as_partition(lam)
    a = as_alpha(alpha)
    if max_length is None:
        max_length = lam.weight
    max_length = max(max_length, lam.length)
    key = (lam.parts, a, max_length, exact)
    tab = _TABLE_CACHE.get(key)
    if tab is not None:
        return tab

    kappa = lam.parts
    w = lam.weight
    candidates = [
        mu for mu in partitions_of(w, max_length) if dominates(kappa, mu)
    ]
    candidates.sort(key=lambda mu: _rho(mu, a), reverse=True)

    if exact:
        coeffs: dict = {kappa: Fraction(1)}
        rho_of = {mu: _rho(mu, a) for mu in candidates}
        two_over_a = Fraction(2) / a
    else:
        coeffs = {kappa: 1.0}
        rho_of = {mu: float(_rho(mu, a)) for mu in candidates}
        two_over_a = 2.0 / float(a)
    rho_kappa = rho_of[kappa]

    for mu in candidates:
        if mu == kappa:
            continue
        acc = Fraction(0) if exact else 0.0
        l = len(mu)
        for j in range(l):
            for i in range(j):
                for t in range(1, mu[j] + 1):
                    nu = list(mu)
                    nu[i] += t
                    nu[j] -= t
                    nu = tuple(sorted((x for x in nu if x > 0), reverse=True))
                    c_nu = coeffs.get(nu)
                    if c_nu is not None:
                        acc += (mu[i] - mu[j] + 2 * t) * c_nu
        coeffs[mu] = two_over_a * acc / (rho_kappa - rho_of[mu])

    with _TABLE_LOCK:
        _TABLE_CACHE[key] = coeffs
    return coeffs


def _distinct_exponent_vectors(mu: tuple, n: int) -> list:
    padded = tuple(mu) + (0,) * (n - len(mu))
    return sorted(set(permutations(padded)), reverse=True)


def monomial_eval(mu, x: Sequence) -> object:
    """Monomial symmetric polynomial m_mu at the point x (any scalar type)."""
    mu = tuple(as_partition(mu).parts)
    n = len(x)
    if len(mu) > n:
        return 0 * x[0] if n else 0
    total = None
    for expo in _distinct_exponent_vectors(mu, n):
        term = 1
        for xi, e in zip(x, expo):
            if e:
                term = term * xi**e
        total = term if total is None else total + term
    return total


def jack_eval(lam, alpha, x: Sequence, exact: bool = False):
    """Jack polynomial P_lam^(alpha) in P-normalization at the point x.

    Returns 0 when lam has more rows than there are variables.
    """
    lam = as_partition(lam)
    n = len(x)
    if lam.length > n:
        return Fraction(0) if exact else 0.0
    if not lam.parts:
        return Fraction(1) if exact else 1.0
    tab = jack_monomial_coefficients(lam, alpha, max_length=n, exact=exact)
    if exact:
        x = [Fraction(xi) for xi in x]
        total = Fraction(0)
    else:
        total = 0.0
    for mu, c in tab.items():
        if len(mu) <= n:
            total += c * monomial_eval(mu, x)
    return total


def jack_eval_batch(lam, alpha, X: np.ndarray) -> np.ndarray:
    """Vectorized P_lam^(alpha) along the last axis of X (shape (..., n))."""
    lam = as_partition(lam)
    X = np.asarray(X)
    n = X.shape[-1]
    lead = X.shape[:-1]
    if lam.length > n:
        return np.zeros(lead, dtype=X.dtype)
    if not lam.parts:
        return np.ones(lead, dtype=X.dtype)
    tab = jack_monomial_coefficients(lam, alpha, max_length=n, exact=False)
    total = np.zeros(lead, dtype=X.dtype)
    for mu, c in tab.items():
        if len(mu) > n:
            continue
        acc = np.zeros(lead, dtype=X.dtype)
        for expo in _distinct_exponent_vectors(mu, n):
            term = np.ones(lead, dtype=X.dtype)
            for i, e in enumerate(expo):
                if e:
                    term = term * X[..., i] ** e
            acc += term
        total += c * acc
    return total


def jack_at_identity(lam, alpha, n: int, exact: bool = False):
    """P_lam^(alpha)(1,...,1) with n ones: alpha^|lam| [n/alpha]_lam / h_lam."""
    lam = as_partition(lam)
    a = as_alpha(alpha)
    hooks = hook_coefficients(lam, a, n, exact=exact)
    if exact:
        return Fraction(hooks.b) / Fraction(hooks.h)
    return float(hooks.b) / float(hooks.h)


# ----------------------------------------------------------------------
# Schur polynomials
# ----------------------------------------------------------------------

def schur_eval(lam, x: Sequence[float]) -> float:
    """Schur polynomial via the bialternant determinant ratio.

    Near-coincident points (any |x_i - x_j| < 1e-8) make the ratio 0/0, so
    those reroute through the monomial expansion (Jack at alpha = 1).
    """
    lam = as_partition(lam)
    n = len(x)
    if lam.length > n:
        return 0.0
    if not lam.parts:
        return 1.0
    xs = np.asarray(x, dtype=float)
    diffs = np.abs(xs[:, None] - xs[None, :])
    if np.any(diffs[np.triu_indices(n, k=1)] < 1e-8):
        return float(jack_eval(lam, 1, list(x)))
    padded = list(lam.parts) + [0] * (n - lam.length)
    num = np.linalg.det(xs[:, None] ** [p + n - 1 - j for j, p in enumerate(padded)])
    den = np.linalg.det(xs[:, None] ** [n - 1 - j for j in range(n)])
    return float(num / den)


def schur_eval_batch(lam, X: np.ndarray) -> np.ndarray:
    """Vectorized Schur values over rows of X; safe at coincident points."""
    return jack_eval_batch(lam, 1, X)


def schur_at_identity(lam, N, exact: bool = False):
    """S_lam(1,...,1) with N ones, valid for real N: [N]_lam^(1) / d'_lam(1)."""
    lam = as_partition(lam)
    poch = gen_pochhammer(N, lam, 1, exact=exact)
    dp = hook_coefficients(lam, 1, 0, exact=exact).d_prime
    return poch / dp
