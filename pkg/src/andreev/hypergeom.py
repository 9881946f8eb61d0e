"""Hypergeometric functions of matrix argument and Selberg-type closed forms.

The 2F1 series of one or two matrix arguments is summed over partitions,
layer by layer in the partition weight, with a geometric tail estimate.
Pochhammer symbols are accumulated incrementally along the enumeration
order (each partition extends a previously seen one by a single box).

Closed forms: the Selberg integral over [0,1]^n, its Jack-polynomial
extension, the [0,inf)^p companion Z_p, the dual generalized Selberg
integral, and the Jacobi-ensemble integral representation of the
terminating 2F1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .partitions import as_partition, partitions_of
from .quad import selberg_quadrature, vandermonde_power
from .symfunc import as_alpha, gen_pochhammer, jack_at_identity, jack_eval, jack_eval_batch

__all__ = [
    "TruncationPolicy",
    "SeriesValue",
    "NonConvergenceError",
    "PochhammerPoleError",
    "ConditionViolatedError",
    "hfma1",
    "hfma1_batch",
    "hfma2",
    "kummer_transform",
    "selberg_base",
    "selberg_jack",
    "zp_constant",
    "ztilde_constant",
    "dual_selberg_jack",
    "hfma1_integral_rep",
]


class NonConvergenceError(RuntimeError):
    """Series truncation budget exhausted before the tail went quiet."""


class PochhammerPoleError(ZeroDivisionError):
    """A denominator Pochhammer symbol vanished on a contributing term."""


class ConditionViolatedError(ValueError):
    """A validity condition of a closed form does not hold."""


@dataclass(frozen=True)
class TruncationPolicy:
    """How far to push a partition series and when to call it converged."""

    max_weight: int = 80
    rel_tol: float = 1e-10
    consecutive_layers: int = 2

    def __post_init__(self):
        if self.max_weight < 0 or self.rel_tol <= 0 or self.consecutive_layers < 1:
            raise ValueError("invalid truncation policy")


@dataclass(frozen=True)
class SeriesValue:
    """A partial series sum with its convergence diagnostics."""

    value: float
    tail_estimate: float
    layers_used: int
    converged: bool

    def __float__(self):
        return self.value


def _series_sum(term_of_partition, n_vars: int, policy: TruncationPolicy) -> SeriesValue:
    """Accumulate sum over partitions with length <= n_vars by weight layer."""
    total = 0.0
    quiet = 0
    zero_streak = 0
    last_sizes: list[float] = []
    layers_used = 0
    for w in range(policy.max_weight + 1):
        layer = 0.0
        for parts in partitions_of(w, n_vars):
            layer += term_of_partition(parts)
        total += layer
        layers_used = w + 1
        size = abs(layer)
        if w > 0:
            if size <= policy.rel_tol * max(abs(total), 1e-300):
                quiet += 1
            else:
                quiet = 0
            zero_streak = zero_streak + 1 if size == 0.0 else 0
            if size > 0:
                last_sizes.append(size)
                del last_sizes[:-2]
        if quiet >= policy.consecutive_layers:
            tail = 0.0
            if zero_streak < quiet and len(last_sizes) == 2 and last_sizes[0] > 0:
                ratio = min(last_sizes[1] / last_sizes[0], 0.95)
                tail = last_sizes[1] * ratio / (1.0 - ratio)
            return SeriesValue(total, tail, layers_used, True)
    if len(last_sizes) == 2 and last_sizes[0] > 0:
        ratio = min(last_sizes[1] / last_sizes[0], 0.95)
        tail = last_sizes[1] * ratio / (1.0 - ratio)
    else:
        tail = abs(last_sizes[-1]) if last_sizes else 0.0
    raise NonConvergenceError(
        f"series not converged after weight {policy.max_weight}: "
        f"tail ~ {tail:.3e} vs total {total:.6e}"
    )


class _PochhammerLedger:
    """Incremental [u]_lam along the enumeration order, held as (log, sign).

    Each partition of weight w > 0 has the parent obtained by removing one
    box from its last row, which was enumerated at weight w-1; the symbol
    gains the single linear factor of that box.  Log storage keeps deep
    series layers (weights in the hundreds) inside float range.
    """

    def __init__(self, u: float, alpha: float):
        self.u = u
        self.inv_alpha = 1.0 / alpha
        self.cache: dict[tuple, tuple[float, float]] = {(): (0.0, 1.0)}

    def logvalue(self, parts: tuple) -> tuple[float, float]:
        v = self.cache.get(parts)
        if v is not None:
            return v
        row = len(parts) - 1
        col = parts[-1]
        parent = parts[:-1] if col == 1 else parts[:-1] + (col - 1,)
        plog, psign = self.logvalue(parent)
        factor = self.u - row * self.inv_alpha + col - 1
        if factor == 0.0 or psign == 0.0:
            v = (-math.inf, 0.0)
        else:
            v = (plog + math.log(abs(factor)), psign * math.copysign(1.0, factor))
        self.cache[parts] = v
        return v


def _log_d_prime(parts: tuple, alpha: float) -> float:
    """log d'_lam(alpha); every cell factor is positive for alpha > 0."""
    conj = [0] * (parts[0] if parts else 0)
    for p in parts:
        for j in range(p):
            conj[j] += 1
    total = 0.0
    for i, p in enumerate(parts, start=1):
        for j in range(1, p + 1):
            total += math.log(alpha * (p - j) + alpha + (conj[j - 1] - i))
    return total


def _log_hook_ratio(parts: tuple, alpha: float, n: int) -> float:
    """log P_lam^(alpha)(1_n) = log b_lam - log h_lam (both cell-positive)."""
    conj = [0] * (parts[0] if parts else 0)
    for p in parts:
        for j in range(p):
            conj[j] += 1
    total = 0.0
    for i, p in enumerate(parts, start=1):
        for j in range(1, p + 1):
            arm = p - j
            leg = conj[j - 1] - i
            total += math.log(alpha * (j - 1) + n - (i - 1))
            total -= math.log(alpha * arm + leg + 1)
    return total


def _is_nonpositive_int(x: float, tol: float = 1e-12) -> bool:
    return x <= tol and abs(x - round(x)) < tol


def hfma1(a: float, b: float, c: float, alpha, X, policy: TruncationPolicy | None = None) -> SeriesValue:
    """2F1^(alpha)(a, b; c | X): sum over partitions of
    alpha^|lam| / d'_lam * [a]_lam [b]_lam / [c]_lam * P_lam^(alpha)(X).

    Terminates exactly when a or b is a non-positive integer.  Raises
    PochhammerPoleError if [c]_lam vanishes on a term whose numerator
    does not.
    """
    policy = policy or TruncationPolicy()
    al = float(as_alpha(alpha))
    X = [float(x) for x in X]
    n = len(X)
    log_al = math.log(al)
    pa, pb, pc = (_PochhammerLedger(float(u), al) for u in (a, b, c))

    def term(parts: tuple) -> float:
        la, sa = pa.logvalue(parts)
        lb, sb = pb.logvalue(parts)
        if sa == 0.0 or sb == 0.0:
            return 0.0
        lc, sc = pc.logvalue(parts)
        if sc == 0.0:
            raise PochhammerPoleError(
                f"[c]_lam vanished at lam={parts} with nonzero numerator"
            )
        w = sum(parts)
        scale = math.exp(w * log_al - _log_d_prime(parts, al) + la + lb - lc)
        return sa * sb * sc * scale * jack_eval(parts, alpha, X)

    return _series_sum(term, n, policy)


def hfma2(a: float, b: float, c: float, alpha, X, Y, policy: TruncationPolicy | None = None) -> SeriesValue:
    """Two-matrix-argument series; X and Y must have the same length n and
    each term carries P_lam(X) P_lam(Y) / P_lam(1_n)."""
    policy = policy or TruncationPolicy()
    al = float(as_alpha(alpha))
    X = [float(x) for x in X]
    Y = [float(y) for y in Y]
    if len(X) != len(Y):
        raise ValueError("X and Y must have equal length")
    n = len(X)
    log_al = math.log(al)
    pa, pb, pc = (_PochhammerLedger(float(u), al) for u in (a, b, c))

    def term(parts: tuple) -> float:
        la, sa = pa.logvalue(parts)
        lb, sb = pb.logvalue(parts)
        if sa == 0.0 or sb == 0.0:
            return 0.0
        lc, sc = pc.logvalue(parts)
        if sc == 0.0:
            raise PochhammerPoleError(
                f"[c]_lam vanished at lam={parts} with nonzero numerator"
            )
        w = sum(parts)
        scale = math.exp(w * log_al - _log_d_prime(parts, al) + la + lb - lc
                         - _log_hook_ratio(parts, al, n))
        return (sa * sb * sc * scale
                * jack_eval(parts, alpha, X) * jack_eval(parts, alpha, Y))

    return _series_sum(term, n, policy)


def hfma1_batch(a: float, b: float, c: float, alpha, X: np.ndarray,
                policy: TruncationPolicy | None = None) -> np.ndarray:
    """2F1^(alpha)(a, b; c | x) for every row x of X (shape (batch, n)).

    Same layer rule as hfma1, with the relative-size test taken over the
    whole batch; used where a series is needed on a quadrature grid.
    """
    policy = policy or TruncationPolicy()
    al = float(as_alpha(alpha))
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be (batch, n)")
    n = X.shape[1]
    log_al = math.log(al)
    pa, pb, pc = (_PochhammerLedger(float(u), al) for u in (a, b, c))
    totals = np.zeros(X.shape[0])
    quiet = 0
    for w in range(policy.max_weight + 1):
        layer = np.zeros(X.shape[0])
        for parts in partitions_of(w, n):
            la, sa = pa.logvalue(parts)
            lb, sb = pb.logvalue(parts)
            if sa == 0.0 or sb == 0.0:
                continue
            lc, sc = pc.logvalue(parts)
            if sc == 0.0:
                raise PochhammerPoleError(
                    f"[c]_lam vanished at lam={parts} with nonzero numerator"
                )
            scale = math.exp(w * log_al - _log_d_prime(parts, al) + la + lb - lc)
            layer += sa * sb * sc * scale * jack_eval_batch(parts, alpha, X)
        totals += layer
        if w > 0:
            rel = np.max(np.abs(layer) / np.maximum(np.abs(totals), 1e-300))
            quiet = quiet + 1 if rel <= policy.rel_tol else 0
            if quiet >= policy.consecutive_layers:
                return totals
    raise NonConvergenceError(
        f"batched series not converged after weight {policy.max_weight}"
    )


def kummer_transform(a: float, b: float, c: float, alpha, X,
                     policy: TruncationPolicy | None = None) -> SeriesValue:
    """Evaluate 2F1(a,b;c|X) as 2F1(c-a, c-b; c|X) / det(1-X)^(a+b-c).

    Maps positive-parameter series onto the terminating regime used by the
    Jacobi-ensemble integral representation.
    """
    inner = hfma1(c - a, c - b, c, alpha, X, policy)
    det = float(np.prod([1.0 - float(x) for x in X]))
    scale = det ** -(a + b - c)
    return SeriesValue(inner.value * scale, inner.tail_estimate * abs(scale),
                       inner.layers_used, inner.converged)


# ----------------------------------------------------------------------
# Selberg-type closed forms
# ----------------------------------------------------------------------

def _gammaln_checked(x: float, what: str) -> float:
    if x <= 0:
        raise ConditionViolatedError(f"Gamma argument {what} = {x} must be positive")
    return math.lgamma(x)


def selberg_base(x: float, y: float, alpha, n: int) -> float:
    """S_n(x,y,alpha) = int_{[0,1]^n} prod R^x (1-R)^y |Delta(R)|^(2/alpha) dR."""
    ia = 1.0 / float(as_alpha(alpha))
    if x <= -1 or y <= -1:
        raise ConditionViolatedError("selberg_base requires x > -1 and y > -1")
    log_total = 0.0
    for j in range(n):
        log_total += (
            _gammaln_checked(x + 1 + j * ia, "x+1+j/alpha")
            + _gammaln_checked(y + 1 + j * ia, "y+1+j/alpha")
            + math.lgamma(1 + (j + 1) * ia)
            - _gammaln_checked(x + y + 2 + (n + j - 1) * ia, "x+y+2+(n+j-1)/alpha")
            - math.lgamma(1 + ia)
        )
    return math.exp(log_total)


def selberg_jack(x: float, y: float, alpha, n: int, lam) -> float:
    """Selberg integral with an extra P_lam^(alpha)(R) in the integrand."""
    lam = as_partition(lam)
    if lam.length > n:
        raise ConditionViolatedError("selberg_jack requires length(lam) <= n")
    ia = 1.0 / float(as_alpha(alpha))
    num = gen_pochhammer(x + 1 + (n - 1) * ia, lam, alpha)
    den = gen_pochhammer(x + y + 2 + 2 * ia * (n - 1), lam, alpha)
    return jack_at_identity(lam, alpha, n) * num / den * selberg_base(x, y, alpha, n)


def zp_constant(a: float, b: float, p: int, alpha) -> float:
    """Z_p(a,b) = int_{[0,inf)^p} prod y^a (1+y)^-b |Delta(y)|^(2/alpha) dy.

    Equals S_p(a, b-a-2-2(p-1)/alpha, alpha) through y = t/(1-t); the
    constant carries no power-of-two prefactor.
    """
    ia = 1.0 / float(as_alpha(alpha))
    if b - a - 1 - 2 * (p - 1) * ia <= 0:
        raise ConditionViolatedError("zp_constant requires b - a - 1 - 2(p-1)/alpha > 0")
    return selberg_base(a, b - a - 2 - 2 * (p - 1) * ia, alpha, p)


def dual_selberg_jack(lam, a: float, b: float, p: int, alpha) -> float:
    """int_{[0,inf)^p} prod y^a (1+y)^-b |Delta|^(2/alpha) P_lam^(alpha)(y) dy.

    Valid while l(lam^t) = lam_1 < b - a - 1 - 2(p-1)/alpha.
    """
    lam = as_partition(lam)
    ia = 1.0 / float(as_alpha(alpha))
    bound = b - a - 1 - 2 * (p - 1) * ia
    lam1 = lam.parts[0] if lam.parts else 0
    if lam1 >= bound:
        raise ConditionViolatedError(
            f"dual Selberg integral needs lam_1 = {lam1} < {bound}"
        )
    if lam.length > p:
        raise ConditionViolatedError("dual_selberg_jack requires length(lam) <= p")
    num = gen_pochhammer(a + 1 + (p - 1) * ia, lam, alpha)
    den = (-1.0) ** lam.weight * gen_pochhammer(a + 2 + 2 * (p - 1) * ia - b, lam, alpha)
    return zp_constant(a, b, p, alpha) * jack_at_identity(lam, alpha, p) * num / den


def ztilde_constant(p: int, q: float, c: float, alpha_prime) -> float:
    """Normalization of the [-1,1]^p Jacobi-ensemble representation.

    Equals the representation integral at X = 0, i.e. the [-1,1] Selberg
    integral with weight (1+l)^(a'(q-p+1)-1) (1-l)^(a'c); related to the
    [0,inf) constant by Ztilde_p = Z_p * 2^(p*a'*(c+q)).
    """
    ap = float(as_alpha(alpha_prime))
    a_exp = ap * (q - p + 1) - 1
    b_exp = ap * c
    two_power = p * (a_exp + b_exp + 1) + ap * p * (p - 1)
    return 2.0**two_power * selberg_base(a_exp, b_exp, 1.0 / ap, p)


def hfma1_integral_rep(p: int, q: int, c: float, alpha_prime, X,
                       m_nodes: int = 80, mc_samples: int = 200_000,
                       rng=None) -> float:
    """2F1^(alpha')(-p, -q; c | X) as a Jacobi-ensemble average on [-1,1]^p.

    The integrand is |Delta(l)|^(2 alpha') (1+l)^(alpha'(q-p+1)-1)
    (1-l)^(alpha' c - n) prod_k (z_k - l_j) with z_k = (1+x_k)/(1-x_k),
    normalized so the value at X = 0 is exactly 1.  Tensor or nested
    Gauss-Jacobi for p <= 3, Monte Carlo beyond.
    """
    ap = float(as_alpha(alpha_prime))
    X = [float(x) for x in X]
    n = len(X)
    if (n - 1) / ap >= c:
        raise ConditionViolatedError("integral representation needs (n-1)/alpha' < c")
    a_exp = ap * (q - p + 1) - 1
    b_exp = ap * c - n
    if a_exp <= -1 or b_exp <= -1:
        raise ConditionViolatedError("weight exponents must exceed -1")
    delta_power = 2.0 * ap
    if abs(delta_power - round(delta_power)) > 1e-12:
        raise ConditionViolatedError("2*alpha' must be an integer for the quadrature")
    delta_power = int(round(delta_power))
    z = [(1 + x) / (1 - x) for x in X]
    prefactor = float(np.prod([(1 - x) ** p for x in X]))
    ztil = ztilde_constant(p, q, c, ap)

    def char_product(T: np.ndarray) -> np.ndarray:
        # T on [0,1]; lambda = 2T - 1
        lam = 2.0 * T - 1.0
        out = np.ones(T.shape[:-1])
        for zk in z:
            out = out * np.prod(zk - lam, axis=-1)
        return out

    if p <= 3:
        # [-1,1] -> [0,1] map: picks up 2^(p(A+B+1) + ap*p(p-1)) from the
        # weights and the Vandermonde factor.
        raw = selberg_quadrature(p, a_exp, b_exp, delta_power, char_product, m=m_nodes)
        two_power = p * (a_exp + b_exp + 1) + ap * p * (p - 1)
        integral = 2.0**two_power * raw
        return prefactor * integral / ztil

    # Monte Carlo fallback: self-normalized importance sampling from the
    # product Jacobi density, with |Delta|^(2 alpha') folded into the weights.
    rng = np.random.default_rng(rng)
    from scipy.stats import beta as beta_dist

    T = beta_dist.rvs(a_exp + 1, b_exp + 1, size=(mc_samples, p), random_state=rng)
    lam = 2.0 * T - 1.0
    w = vandermonde_power(lam, delta_power)
    num = w * np.prod([np.prod(zk - lam, axis=-1) for zk in z], axis=0)
    den = w * np.prod((1.0 - lam), axis=-1) ** n
    return prefactor * float(np.sum(num) / np.sum(den))
