"""Independent oracles used to freeze expected values in the tests.

The Jack oracle here shares no code path with the library: it builds the
alpha-deformed Hall inner product on power sums, converts to the monomial
basis by explicit polynomial algebra over exact rationals, and solves the
triangular orthogonality system defining P_lam.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import factorial


def partitions_of_exact(w, max_part=None):
    if max_part is None:
        max_part = w
    if w == 0:
        yield ()
        return
    for first in range(min(w, max_part), 0, -1):
        for rest in partitions_of_exact(w - first, first):
            yield (first,) + rest


def _poly_mul(p, q, nvars):
    out = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, Fraction(0)) + ca * cb
    return out


def _power_sum(k, nvars):
    out = {}
    for i in range(nvars):
        e = [0] * nvars
        e[i] = k
        out[tuple(e)] = Fraction(1)
    return out


def _p_rho(rho, nvars):
    poly = {tuple([0] * nvars): Fraction(1)}
    for k in rho:
        poly = _poly_mul(poly, _power_sum(k, nvars), nvars)
    return poly


def _m_mu(mu, nvars):
    padded = tuple(mu) + (0,) * (nvars - len(mu))
    return {e: Fraction(1) for e in set(permutations(padded))}


def _symmetric_to_m_coeffs(poly, weight, nvars):
    """Coefficients of a symmetric polynomial on the m_mu basis."""
    out = {}
    for mu in partitions_of_exact(weight):
        if len(mu) > nvars:
            continue
        e = tuple(mu) + (0,) * (nvars - len(mu))
        out[mu] = poly.get(e, Fraction(0))
    return out


def _z(rho):
    mult = {}
    for part in rho:
        mult[part] = mult.get(part, 0) + 1
    z = 1
    for part, m in mult.items():
        z *= part**m * factorial(m)
    return Fraction(z)


def _solve_fraction(A, b):
    n = len(b)
    M = [row[:] + [b[i]] for i, row in enumerate(A)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        inv = Fraction(1) / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def _dominates(lam, mu):
    s1 = s2 = 0
    for k in range(max(len(lam), len(mu))):
        s1 += lam[k] if k < len(lam) else 0
        s2 += mu[k] if k < len(mu) else 0
        if s2 > s1:
            return False
    return True


def jack_in_monomial_basis_oracle(lam, alpha):
    """P_lam^(alpha) = m_lam + sum_{mu < lam} c_mu m_mu via the inner product
    <p_rho, p_sigma> = delta z_rho alpha^{l(rho)}.  Exact rationals."""
    lam = tuple(lam)
    w = sum(lam)
    alpha = Fraction(alpha)
    nvars = w  # enough variables for a faithful basis at this weight
    parts = [rho for rho in partitions_of_exact(w)]

    # p_rho on the m basis -> matrix R[rho][mu]
    R = {rho: _symmetric_to_m_coeffs(_p_rho(rho, nvars), w, nvars) for rho in parts}
    # invert: m_mu on the p basis, solving R^T x = e_mu columnwise
    idx = {rho: i for i, rho in enumerate(parts)}
    n = len(parts)
    A = [[R[rho].get(mu, Fraction(0)) for rho in parts] for mu in parts]
    M_in_p = {}
    for mu in parts:
        rhs = [Fraction(1) if nu == mu else Fraction(0) for nu in parts]
        M_in_p[mu] = _solve_fraction([row[:] for row in A], rhs)

    def gram(mu, nu):
        total = Fraction(0)
        for rho in parts:
            i = idx[rho]
            total += (M_in_p[mu][i] * M_in_p[nu][i]
                      * _z(rho) * alpha ** len(rho))
        return total

    lower = [mu for mu in parts if mu != lam and _dominates(lam, mu)]
    if not lower:
        return {lam: Fraction(1)}
    G = [[gram(mu, nu) for nu in lower] for mu in lower]
    rhs = [-gram(lam, mu) for mu in lower]
    coeffs = _solve_fraction(G, rhs)
    out = {lam: Fraction(1)}
    out.update({mu: c for mu, c in zip(lower, coeffs)})
    return out


def jack_eval_oracle(lam, alpha, x):
    """Evaluate the oracle expansion at a float point."""
    table = jack_in_monomial_basis_oracle(lam, alpha)
    n = len(x)
    total = 0.0
    for mu, c in table.items():
        if len(mu) > n:
            continue
        padded = tuple(mu) + (0,) * (n - len(mu))
        m_val = 0.0
        for e in set(permutations(padded)):
            term = 1.0
            for xi, ei in zip(x, e):
                term *= xi**ei
            m_val += term
        total += float(c) * m_val
    return total
