"""Gauss-Jacobi quadrature helpers for Selberg-type integrals.

Two engines cover the integrals this package meets:

* even Vandermonde powers (|Delta|^2, |Delta|^4): plain tensor-product
  Gauss-Jacobi, exact once the node count covers the polynomial degree;
* odd powers (|Delta|^1): the domain is ordered t_1 <= ... <= t_p and the
  result multiplied by p!, so the |.| disappears and nested Gauss-Jacobi
  converges spectrally.

All rules live on [0, 1] with the weight t^A (1-t)^B folded into the
quadrature weights, so endpoint singularities with A, B > -1 are handled
exactly.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np
from scipy.special import roots_jacobi

__all__ = [
    "jacobi_rule_01",
    "selberg_quadrature",
    "vandermonde_power",
]


def jacobi_rule_01(m: int, a_exp: float, b_exp: float):
    """Nodes/weights on [0,1] such that sum w_i f(t_i) ~ int t^A (1-t)^B f dt."""
    if a_exp <= -1 or b_exp <= -1:
        raise ValueError("endpoint exponents must be > -1")
    x, w = roots_jacobi(m, b_exp, a_exp)  # scipy weight: (1-x)^alpha (1+x)^beta
    t = 0.5 * (x + 1.0)
    w = w * 0.5 ** (a_exp + b_exp + 1)
    return t, w


def vandermonde_power(T: np.ndarray, power: int) -> np.ndarray:
    """prod_{i<j} |T[..., j] - T[..., i]|^power along the last axis."""
    p = T.shape[-1]
    out = np.ones(T.shape[:-1])
    for i in range(p):
        for j in range(i + 1, p):
            out = out * np.abs(T[..., j] - T[..., i]) ** power
    return out


def _tensor_selberg(p, a_exp, b_exp, delta_power, f, m):
    t, w = jacobi_rule_01(m, a_exp, b_exp)
    nodes = np.array(list(product(t, repeat=p)))
    weights = np.prod(np.array(list(product(w, repeat=p))), axis=1)
    vals = vandermonde_power(nodes, delta_power)
    if f is not None:
        vals = vals * f(nodes)
    return float(np.dot(weights, vals))


def _nested_ordered_selberg(p, a_exp, b_exp, delta_power, f, m):
    """Iterated rule over 0 <= t_1 <= ... <= t_p <= 1, times p!.

    t_p gets the full [0,1] Jacobi rule; each inner variable lives on
    [0, upper] with the t^A endpoint weight mapped exactly and the
    (1-t)^B factor carried numerically (it is smooth strictly inside).
    The inner (p-1)-dimensional mesh is built once in unit coordinates
    and rescaled per outer node, so memory stays at m^(p-1).
    """
    t_full, w_full = jacobi_rule_01(m, a_exp, b_exp)
    t_unit, w_unit = jacobi_rule_01(m, a_exp, 0.0)

    q = p - 1  # inner variables, outside-in: v_k = t_p * u_1 ... u_k
    shape = (m,) * q
    cum = np.ones(shape)
    U_cum = []
    W_unit = np.ones(shape)
    for k in range(q):
        pad = (1,) * k + (m,) + (1,) * (q - 1 - k)
        uk = t_unit.reshape(pad)
        W_unit = W_unit * w_unit.reshape(pad)
        # each u_k is the upper limit of the (p-1-k-1) variables below it
        if q - 1 - k > 0:
            W_unit = W_unit * uk ** ((q - 1 - k) * (a_exp + 1.0))
        cum = cum * uk
        U_cum.append(cum.copy())

    total = 0.0
    for tp, wp in zip(t_full, w_full):
        T = [tp * U for U in U_cum]           # v_1 (largest inner) .. v_q
        weight = wp * tp ** (q * (a_exp + 1.0)) * W_unit
        for Tk in T:
            weight = weight * (1.0 - Tk) ** b_exp
        pts = np.stack(T[::-1] + [np.full(shape, tp)], axis=-1)  # ascending
        vals = vandermonde_power(pts, delta_power)
        if f is not None:
            vals = vals * f(pts)
        total += float(np.sum(weight * vals))
    return math.factorial(p) * total


def selberg_quadrature(p: int, a_exp: float, b_exp: float, delta_power: int,
                       f=None, m: int = 60) -> float:
    """int_{[0,1]^p} prod_j t_j^A (1-t_j)^B |Delta(t)|^d f(t) dt.

    `f` takes an array whose last axis has length p and must be symmetric
    in those p arguments.
    """
    if p == 1:
        t, w = jacobi_rule_01(m, a_exp, b_exp)
        vals = np.ones_like(t) if f is None else f(t[:, None])
        return float(np.dot(w, vals))
    if delta_power % 2 == 0:
        return _tensor_selberg(p, a_exp, b_exp, delta_power, f, m)
    return _nested_ordered_selberg(p, a_exp, b_exp, delta_power, f, m)
