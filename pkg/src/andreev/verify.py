"""The cross-validation suite: every identity, oracle and statistical check.

Each check is registered with a name and tags (its module, plus the
acceptance criterion it belongs to, c1..c12).  `run_suite` executes an
optionally filtered set and returns structured results; the CLI renders
them and sets the exit code.

Analytic identities run in exact rational arithmetic; numerical oracles
(quadrature, classical special functions, brute-force sums) run at stated
tolerances; Monte Carlo checks run at 10^5 samples and three standard
errors.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import hyp2f1

from . import pfaffian as pfm
from . import sampling as smp
from . import symfunc as sf
from .ensembles import (
    EnsembleSpec,
    analytic_bin_probabilities,
    ensemble_constants,
    hfma_parameters,
    ideal_normalization,
    jpdf_ideal,
    jpdf_integral,
    jpdf_semi_ideal,
    normalization_constant,
)
from .hypergeom import (
    TruncationPolicy,
    dual_selberg_jack,
    hfma1,
    hfma1_integral_rep,
    hfma2,
    kummer_transform,
    selberg_base,
    selberg_jack,
    zp_constant,
)
from .partitions import Partition, cell_data, enumerate_partitions, partitions_of
from .quad import selberg_quadrature

__all__ = ["CheckResult", "run_suite", "list_checks", "ACCEPTANCE_TAGS"]

ACCEPTANCE_TAGS = tuple(f"c{i}" for i in range(1, 13))

_REGISTRY: list[tuple[str, tuple, object]] = []


def _check(name, *tags):
    def wrap(fn):
        _REGISTRY.append((name, tags, fn))
        return fn

    return wrap


@dataclass
class CheckResult:
    name: str
    tags: tuple
    passed: bool
    error: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:44s} err={self.error:9.3e} "
                f"tol={self.tolerance:9.3e}  [{self.seconds:6.2f}s] {self.detail}")


def list_checks(filter_tag: str | None = None) -> list[str]:
    return [name for name, tags, _ in _REGISTRY
            if filter_tag is None or filter_tag in tags or filter_tag in name]


def run_suite(filter_tag: str | None = None) -> list[CheckResult]:
    """Run the (filtered) checks; a filter matches a tag or a name substring."""
    results = []
    for name, tags, fn in _REGISTRY:
        if filter_tag is not None and filter_tag not in tags and filter_tag not in name:
            continue
        t0 = time.time()
        try:
            passed, error, tol, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, error, tol, detail = False, float("nan"), 0.0, f"exception: {exc!r}"
        results.append(CheckResult(name, tags, bool(passed), float(error),
                                   float(tol), detail, time.time() - t0))
    return results


def _partitions_upto(max_weight, max_length=None):
    return [lam for lam in enumerate_partitions(max_weight, max_length)]


# ======================================================================
# partitions
# ======================================================================

@_check("partitions.conjugate-involution", "partitions")
def _conjugate_involution():
    bad = 0
    for lam in _partitions_upto(8):
        c = lam.conjugate()
        if c.conjugate() != lam or c.weight != lam.weight:
            bad += 1
        if lam.parts and lam.parts[0] != c.length:
            bad += 1
    return bad == 0, float(bad), 0.0, "conj(conj)=id, weight kept, l(conj)=lam_1"


@_check("partitions.cell-identities", "partitions")
def _cell_identities():
    bad = 0
    for lam in _partitions_upto(8):
        conj = lam.conjugate()
        for (i, j) in lam.cells():
            arm, leg, coarm, coleg = cell_data(lam, i, j)
            if arm + coarm + 1 != lam.parts[i - 1]:
                bad += 1
            if leg + coleg + 1 != conj.parts[j - 1]:
                bad += 1
    return bad == 0, float(bad), 0.0, "arm+coarm+1 = lam_i; leg+coleg+1 = conj_j"


@_check("partitions.enumeration-vs-counting-oracle", "partitions")
def _enumeration_count():
    # independent recursive counting oracle p(w, max part) on weight <= 10
    def count(w, max_part):
        if w == 0:
            return 1
        if max_part == 0:
            return 0
        return sum(count(w - k, k) for k in range(1, min(w, max_part) + 1))

    bad = 0
    for w in range(11):
        seen = list(partitions_of(w))
        if len(seen) != len(set(seen)) or len(seen) != count(w, w):
            bad += 1
    listed = [tuple(p) for p in enumerate_partitions(2, 2)]
    if listed != [(), (1,), (2,), (1, 1)]:
        bad += 1
    n30 = sum(1 for _ in enumerate_partitions(6, 6))
    if n30 != 30:
        bad += 1
    return bad == 0, float(bad), 0.0, "no duplicates, counts match, order fixed"


# ======================================================================
# symfunc: the exact identity suite (criterion 1)
# ======================================================================

_ALPHAS = (Fraction(1, 2), Fraction(1), Fraction(2))


@_check("symfunc.pochhammer-product-identities", "symfunc", "c1")
def _e_identities():
    bad = 0
    for alpha in _ALPHAS:
        for n in range(1, 6):
            for lam in _partitions_upto(6):
                h = sf.hook_coefficients(lam, alpha, n, exact=True)
                w = lam.weight
                if h.e_prime != alpha**w * sf.gen_pochhammer(1 + Fraction(n - 1) / alpha, lam, alpha, exact=True):
                    bad += 1
                if h.b != alpha**w * sf.gen_pochhammer(Fraction(n) / alpha, lam, alpha, exact=True):
                    bad += 1
                if h.e != alpha**w * sf.gen_pochhammer(1 + Fraction(n) / alpha, lam, alpha, exact=True):
                    bad += 1
    return bad == 0, float(bad), 0.0, "e/e'/b as alpha^|lam| Pochhammer, exact"


@_check("symfunc.jack-at-identity-exact", "symfunc", "c1")
def _jack_identity_exact():
    bad = 0
    for alpha in _ALPHAS:
        for n in range(1, 6):
            for lam in _partitions_upto(6):
                lhs = sf.jack_eval(lam, alpha, [Fraction(1)] * n, exact=True)
                rhs = sf.jack_at_identity(lam, alpha, n, exact=True)
                if lhs != rhs:
                    bad += 1
    return bad == 0, float(bad), 0.0, "P_lam(1_n) = b/h exactly, alpha in {1/2,1,2}, n<=5"


@_check("symfunc.schur-jack-relations", "symfunc", "c1")
def _schur_jack_exact():
    bad = 0
    for n in range(1, 5):
        for lam in _partitions_upto(6):
            # alpha = 1: the Jack polynomial is the Schur polynomial
            if sf.jack_at_identity(lam, 1, n, exact=True) != sf.schur_at_identity(lam, n, exact=True):
                bad += 1
            # alpha = 2 -> S_{2 lam}(1_n)
            h2 = sf.hook_coefficients(lam, 2, n, exact=True)
            lhs = h2.e_prime / h2.d_prime * sf.jack_at_identity(lam, 2, n, exact=True)
            if lhs != sf.schur_at_identity(lam.doubled(), n, exact=True):
                bad += 1
            # alpha = 1/2 -> S_{lam u lam}(1_{2n})
            hh = sf.hook_coefficients(lam, Fraction(1, 2), n, exact=True)
            lhs = hh.e_prime / hh.d_prime * sf.jack_at_identity(lam, Fraction(1, 2), n, exact=True)
            if lhs != sf.schur_at_identity(lam.union_self(), 2 * n, exact=True):
                bad += 1
    return bad == 0, float(bad), 0.0, "all three degeneration branches exact"


@_check("symfunc.quaternion-pochhammer-identity", "symfunc", "c1")
def _identity_quaternion():
    bad = 0
    half = Fraction(1, 2)
    for x in (Fraction(3, 2), Fraction(27, 10), Fraction(10)):
        for lam in _partitions_upto(8):
            uu = lam.union_self()
            lhs = (sf.gen_pochhammer(2 * x, uu, 1, exact=True)
                   / sf.hook_coefficients(uu, 1, 0, exact=True).h)
            hooks = sf.hook_coefficients(lam, half, 0, exact=True)
            rhs = (half ** (2 * lam.weight)
                   * sf.gen_pochhammer(2 * x, lam, half, exact=True)
                   * sf.gen_pochhammer(2 * x - 1, lam, half, exact=True)
                   / (hooks.d_prime * hooks.h))
            if lhs != rhs:
                bad += 1
    return bad == 0, float(bad), 0.0, "[2x]_{ll}/h_{ll} doubling identity at 3 real x"


@_check("symfunc.pochhammer-duality", "symfunc", "c1")
def _pochhammer_dual():
    bad = 0
    for alpha in (Fraction(1, 2), Fraction(2)):
        for s in (Fraction(3, 2), Fraction(-7, 3), Fraction(5)):
            for lam in _partitions_upto(6):
                lhs = sf.gen_pochhammer(s, lam, alpha, exact=True)
                rhs = ((-1) ** lam.weight * alpha ** (-lam.weight)
                       * sf.gen_pochhammer(-alpha * s, lam.conjugate(), 1 / alpha, exact=True))
                if lhs != rhs:
                    bad += 1
    return bad == 0, float(bad), 0.0, "[s]_lam = (-1/alpha)^|lam| [-alpha s]_{lam^t}"


@_check("symfunc.hook-length-duality", "symfunc", "c1")
def _hook_dual():
    bad = 0
    for alpha in (Fraction(1, 2), Fraction(2), Fraction(3, 2)):
        for lam in _partitions_upto(6):
            h = sf.hook_coefficients(lam, alpha, 0, exact=True).h
            dp = sf.hook_coefficients(lam.conjugate(), 1 / alpha, 0, exact=True).d_prime
            if h != alpha**lam.weight * dp:
                bad += 1
    return bad == 0, float(bad), 0.0, "h_lam(a) = a^|lam| d'_{lam^t}(1/a)"


@_check("symfunc.jack-schur-degeneration", "symfunc", "c2")
def _jack_schur_degeneration():
    rng = np.random.default_rng(20260810)
    worst = 0.0
    for n in range(1, 5):
        pts = rng.uniform(-1.0, 1.0, size=(50, n))
        for lam in _partitions_upto(6, n):
            for x in pts:
                j = sf.jack_eval(lam, 1, list(x))
                s = sf.schur_eval(lam, list(x))
                err = abs(j - s) / max(1.0, abs(s))
                worst = max(worst, err)
    return worst <= 1e-10, worst, 1e-10, "alpha=1 Jack vs bialternant Schur, 50 pts"


@_check("symfunc.dual-cauchy-identity", "symfunc", "c3")
def _dual_cauchy():
    rng = np.random.default_rng(7)
    worst = 0.0
    for alpha in (Fraction(1, 2), Fraction(1), Fraction(2)):
        for _ in range(4):
            x = rng.uniform(-0.54, 0.54, size=2)
            y = rng.uniform(-0.54, 0.54, size=2)
            if np.max(np.abs(np.outer(x, y))) > 0.3:
                y = y * 0.3 / np.max(np.abs(np.outer(x, y)))
            target = float(np.prod(1.0 + np.outer(x, y)))
            total = 0.0
            for lam in _partitions_upto(12):
                pl = sf.jack_eval(lam, alpha, list(y))
                if pl == 0.0:
                    continue
                plt = sf.jack_eval(lam.conjugate(), 1 / alpha, list(x))
                total += plt * pl
            worst = max(worst, abs(total - target) / abs(target))
    return worst <= 1e-8, worst, 1e-8, "prod(1+x_j y_k) = sum P_{lam^t}^{1/a} P_lam^a"


@_check("symfunc.determinant-expansion", "symfunc", "c3")
def _det_expansion():
    worst = 0.0
    X = [0.3, -0.2, 0.1]
    for a in (1.5, 3.0):
        target = float(np.prod([(1 - x) ** (-a) for x in X]))
        total = 0.0
        for lam in _partitions_upto(40, 3):
            s = sf.schur_eval(lam, X)
            if s == 0.0:
                continue
            total += float(sf.schur_at_identity(lam, a)) * s
        worst = max(worst, abs(total - target) / abs(target))
    return worst <= 1e-8, worst, 1e-8, "det(1-X)^-a = sum S_lam(1_a) S_lam(X)"


# ======================================================================
# hypergeom (criteria 5, 6, 7)
# ======================================================================

def _zp_quadrature(a, b, p, alpha, m=80):
    """Oracle for Z_p via y = t/(1-t) and the [0,1] Selberg quadrature."""
    ia = 1.0 / float(alpha)
    beta = int(round(2 * ia))
    return selberg_quadrature(p, a, b - a - 2.0 - 2.0 * (p - 1) * ia, beta, m=m)


@_check("hypergeom.selberg-closed-forms-vs-quadrature", "hypergeom", "c5")
def _selberg_grid():
    cases = []
    # S_n
    for (x, y, alpha, n) in [(0.5, 1.0, 2, 1), (0.5, 1.0, 2, 2), (1.0, 0.5, Fraction(1, 2), 2),
                             (0.0, 1.0, 1, 2), (-0.5, -0.5, 2, 2)]:
        closed = selberg_base(x, y, alpha, n)
        beta = int(round(2.0 / float(alpha)))
        quad = selberg_quadrature(n, x, y, beta, m=80)
        cases.append((f"S_{n}({x},{y},{alpha})", closed, quad))
    # Z_p
    for (a, b, p, alpha) in [(0.0, 3.0, 1, 2), (1.0, 9.0, 2, Fraction(1, 2)),
                             (0.0, 6.0, 2, 1), (0.5, 7.0, 2, 2)]:
        cases.append((f"Z_{p}({a},{b},a={alpha})", zp_constant(a, b, p, alpha),
                      _zp_quadrature(a, b, p, alpha)))
    # selberg_jack
    def jack_factor(lam, alpha):
        def f(T):
            return sf.jack_eval_batch(lam, alpha, T)
        return f

    for (x, y, alpha, n, lam) in [(0.0, 1.0, 2, 2, (1,)), (0.5, 1.0, Fraction(1, 2), 2, (2, 1))]:
        closed = selberg_jack(x, y, alpha, n, lam)
        beta = int(round(2.0 / float(alpha)))
        quad = selberg_quadrature(n, x, y, beta, jack_factor(Partition(lam), alpha), m=80)
        cases.append((f"SJ_{n}({lam},a={alpha})", closed, quad))
    # dual_selberg_jack
    for (lam, a, b, p, alpha) in [((1,), 0.0, 6.0, 1, 2), ((1,), 0.0, 8.0, 2, 2)]:
        closed = dual_selberg_jack(lam, a, b, p, alpha)
        ia = 1.0 / float(alpha)
        beta = int(round(2 * ia))

        def f(T, lam=lam, alpha=alpha):
            return sf.jack_eval_batch(lam, alpha, T / (1.0 - T))

        quad = selberg_quadrature(p, a, b - a - 2.0 - 2.0 * (p - 1) * ia, beta, f, m=80)
        cases.append((f"DSJ_{p}({lam},a={alpha})", closed, quad))

    worst = max(abs(c - q) / max(1.0, abs(c)) for _, c, q in cases)
    return worst <= 1e-6, worst, 1e-6, f"{len(cases)} cases (S_n, Z_p, jack, dual)"


@_check("hypergeom.integral-representation-grid", "hypergeom", "c6")
def _integral_rep_grid():
    grid = [
        # (p, q, c, alpha', X, tol)
        (1, 1, 1.0, 2, [0.3], 1e-9),
        (1, 2, 1.5, 2, [0.4], 1e-9),
        (2, 2, 2.0, 2, [0.3], 1e-9),
        (2, 3, 2.5, 2, [0.5, -0.2], 1e-9),
        (3, 3, 2.0, 2, [0.2], 1e-9),
        (2, 2, 2.0, 1, [0.3, 0.1], 1e-9),
        (2, 3, 4.0, Fraction(1, 2), [0.2, 0.1], 1e-6),
        (2, 2, 3.0, Fraction(1, 2), [0.3], 1e-6),
        (1, 3, 2.5, Fraction(1, 2), [0.5], 1e-6),
        (3, 4, 5.0, Fraction(1, 2), [0.25, 0.1], 1e-6),
    ]
    worst_rel = 0.0
    ok = True
    for (p, q, c, ap, X, tol) in grid:
        series = hfma1(-p, -q, c, ap, X).value
        rep = hfma1_integral_rep(p, q, c, ap, X, m_nodes=80)
        rel = abs(series - rep) / max(1.0, abs(series))
        worst_rel = max(worst_rel, rel / tol)
        if rel > tol:
            ok = False
    return ok, worst_rel, 1.0, "worst error as a fraction of the per-case tol"


@_check("hypergeom.kummer-relation-ensemble-families", "hypergeom", "c7")
def _kummer_families():
    worst = 0.0
    cases = []
    for kind, pairs in (("PRE", [(1, 2), (2, 2), (1, 3)]),
                        ("PQE", [(1, 1), (2, 2), (1, 2)])):
        for (n, m) in pairs:
            spec = EnsembleSpec(kind, n, m, (0.5,))
            a, b, c = hfma_parameters(spec)
            alpha = ensemble_constants(spec).alpha
            rng = np.random.default_rng(n * 10 + m)
            X = 0.25 * rng.uniform(0.1, 0.95, size=n)
            direct = hfma1(a, b, c, alpha, X)
            viak = kummer_transform(a, b, c, alpha, X)
            allowed = direct.tail_estimate + viak.tail_estimate + 1e-9 * abs(direct.value)
            err = abs(direct.value - viak.value)
            worst = max(worst, err / allowed)
            cases.append(f"{kind}({n},{m})")
    return worst <= 1.0, worst, 1.0, "error / combined-tail for " + ",".join(cases)


@_check("hypergeom.kummer-involution", "hypergeom")
def _kummer_involution():
    # applying the parameter map twice returns the original value
    a, b, c, alpha = 2.0, 1.5, 3.0, 2
    X = [0.2, 0.1]
    once = kummer_transform(a, b, c, alpha, X)
    inner = kummer_transform(c - a, c - b, c, alpha, X)
    det = float(np.prod([1 - x for x in X]))
    twice = inner.value / det ** (a + b - c)
    direct = hfma1(a, b, c, alpha, X)
    err = abs(twice - direct.value) / abs(direct.value)
    return err <= 1e-9, err, 1e-9, "double transform reproduces the series"


@_check("hypergeom.terminating-series-prefix", "hypergeom")
def _terminating_prefix():
    # negative integer first parameter kills weights above p*n = 4 exactly
    val_lo = hfma1(-2, 1.7, 2.2, 2, [0.4, 0.3], TruncationPolicy(max_weight=6))
    val_hi = hfma1(-2, 1.7, 2.2, 2, [0.4, 0.3], TruncationPolicy(max_weight=60))
    err = abs(val_lo.value - val_hi.value)
    ok = err == 0.0 and val_lo.tail_estimate == 0.0
    return ok, err, 0.0, "weight-6 prefix equals the weight-60 sum exactly"


@_check("hypergeom.value-at-zero", "hypergeom")
def _series_at_zero():
    v1 = hfma1(1.3, 2.1, 0.9, Fraction(1, 2), [0.0, 0.0])
    v2 = hfma2(1.3, 2.1, 0.9, 2, [0.0, 0.0], [0.3, 0.1])
    err = abs(v1.value - 1.0) + abs(v2.value - 1.0)
    return err == 0.0, err, 0.0, "only the empty partition survives at X=0"


@_check("hypergeom.two-argument-reduction", "hypergeom")
def _hfma2_reduction():
    a, b, c, alpha = 1.1, 2.3, 3.4, Fraction(1, 2)
    X = [0.25, 0.1]
    two = hfma2(a, b, c, alpha, X, [1.0, 1.0])
    one = hfma1(a, b, c, alpha, X)
    err = abs(two.value - one.value) / abs(one.value)
    brute = 0.0
    for lam in _partitions_upto(20, 2):
        hooks = sf.hook_coefficients(lam, alpha, 0)
        coeff = (float(alpha) ** lam.weight / float(hooks.d_prime)
                 * sf.gen_pochhammer(a, lam, alpha) * sf.gen_pochhammer(b, lam, alpha)
                 / sf.gen_pochhammer(c, lam, alpha))
        brute += (coeff * sf.jack_eval(lam, alpha, X)
                  * sf.jack_eval(lam, alpha, [0.3, 0.05])
                  / sf.jack_at_identity(lam, alpha, 2))
    mixed = hfma2(a, b, c, alpha, X, [0.3, 0.05])
    err2 = abs(mixed.value - brute) / abs(brute)
    return max(err, err2) <= 1e-9, max(err, err2), 1e-9, "Y=1 reduction + brute-force sum"


@_check("hypergeom.classical-scalar-oracle", "hypergeom")
def _classical_oracle():
    worst = 0.0
    for (a, b, c, x) in [(0.5, 1.5, 2.5, 0.3), (1.2, 0.7, 2.4, 0.3), (2.0, 1.0, 0.7, -0.4)]:
        for alpha in (Fraction(1, 2), Fraction(1), Fraction(2)):
            mine = hfma1(a, b, c, alpha, [x], TruncationPolicy(rel_tol=1e-13)).value
            ref = float(hyp2f1(a, b, c, x))
            worst = max(worst, abs(mine - ref) / abs(ref))
    return worst <= 1e-10, worst, 1e-10, "n=1 series is the Gauss 2F1 for every alpha"


# ======================================================================
# ensembles (criterion 8)
# ======================================================================

_POLICY = TruncationPolicy(max_weight=160, rel_tol=1e-9)


@_check("ensembles.normalization-closed-form", "ensembles", "c8")
def _normalization():
    worst = 0.0
    for kind in ("PRE", "PQE"):
        for (n, m) in ((1, 1), (1, 2), (2, 2)):
            for g in (0.3, 0.6):
                spec = EnsembleSpec(kind, n, m, (g,))
                val = jpdf_integral(spec, _POLICY, m_nodes=80)
                worst = max(worst, abs(val - 1.0))
    exact_bad = 0
    for kind in ("PRE", "PQE"):
        spec = EnsembleSpec(kind, 2, 3, (0.0,))
        if normalization_constant(spec) != ideal_normalization(spec):
            exact_bad += 1
    ok = worst <= 1e-4 and exact_bad == 0
    return ok, worst, 1e-4, "quadrature of the density integrates to 1; gamma=0 -> C_n"


@_check("ensembles.general-coupling-normalization", "ensembles")
def _normalization_vector_gamma():
    spec = EnsembleSpec("PRE", 2, 2, (0.3, 0.6))
    val = jpdf_integral(spec, TruncationPolicy(max_weight=80, rel_tol=1e-8), m_nodes=48)
    err = abs(val - 1.0)
    return err <= 1e-4, err, 1e-4, "distinct gamma_j via the two-argument series"


@_check("ensembles.symmetry-and-positivity", "ensembles")
def _jpdf_symmetry():
    rng = np.random.default_rng(3)
    worst = 0.0
    neg = 0
    for kind in ("PRE", "PQE"):
        spec = EnsembleSpec(kind, 2, 3, (0.45,))
        for _ in range(10):
            R = np.sort(rng.uniform(0.03, 0.97, size=2))
            if R[1] - R[0] < 0.05:
                continue
            v1 = jpdf_semi_ideal(spec, R, _POLICY)
            v2 = jpdf_semi_ideal(spec, R[::-1], _POLICY)
            if v1 < 0:
                neg += 1
            worst = max(worst, abs(v1 - v2) / max(abs(v1), 1e-300))
    ok = worst <= 1e-12 and neg == 0
    return ok, worst, 1e-12, "permutation invariance; density >= 0"


@_check("ensembles.ideal-limit", "ensembles")
def _ideal_limit():
    rng = np.random.default_rng(5)
    worst = 0.0
    for kind, ideal_kind in (("PRE", "CRE"), ("PQE", "CQE")):
        semi = EnsembleSpec(kind, 2, 3, (0.0,))
        ideal = EnsembleSpec(ideal_kind, 2, 3)
        for _ in range(20):
            R = np.sort(rng.uniform(0.02, 0.98, size=2))
            a = jpdf_semi_ideal(semi, R)
            b = jpdf_ideal(ideal, R)
            worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
    return worst <= 1e-14, worst, 1e-14, "gamma=0 density equals the circular one"


# ======================================================================
# sampling (criteria 4 and 9)
# ======================================================================

_MC_SAMPLES = 100_000


def _schur_of_matrices(lam, mats):
    eigs = np.linalg.eigvals(mats)
    return np.real(sf.jack_eval_batch(lam, 1, eigs))


@_check("sampling.matrix-invariants", "sampling")
def _matrix_invariants():
    rng = np.random.default_rng(11)
    worst = 0.0
    Q = smp.haar_orthogonal_batch(3, 200, rng)
    worst = max(worst, np.abs(np.einsum("sij,sik->sjk", Q, Q) - np.eye(3)).max())
    worst = max(worst, np.abs(np.linalg.norm(Q, axis=1) - 1.0).max())
    S = smp.haar_special_orthogonal_batch(4, 200, rng)
    worst = max(worst, np.abs(np.linalg.det(S) - 1.0).max())
    U = smp.haar_symplectic_batch(2, 200, rng)
    worst = max(worst, np.abs(np.einsum("sij,sik->sjk", U.conj(), U) - np.eye(4)).max())
    J = smp.symplectic_unit(2)
    worst = max(worst, np.abs(U + J @ U.conj() @ J).max())
    return worst <= 1e-10, worst, 1e-10, "unitarity, det +1, quaternion reality"


@_check("sampling.zonal-orthogonal-integral", "sampling", "c4")
def _zonal_orthogonal():
    rng = np.random.default_rng(101)
    n = 3
    A = rng.standard_normal((n, n)) * 0.6
    U = smp.haar_orthogonal_batch(n, _MC_SAMPLES, rng)
    lam = Partition((1, 1))
    vals = _schur_of_matrices(lam.doubled(), A @ U)
    mean, se = vals.mean(), vals.std(ddof=1) / np.sqrt(vals.size)
    aa_eigs = np.linalg.eigvalsh(A @ A.T)
    target = (sf.jack_eval(lam, 2, list(aa_eigs))
              / sf.jack_at_identity(lam, 2, n))
    dev = abs(mean - target) / se
    return dev <= 3.0, dev, 3.0, f"S_(2,2)(AU) MC vs zonal ratio ({_MC_SAMPLES} draws)"


@_check("sampling.zonal-orthogonal-factorization", "sampling", "c4")
def _zonal_factorization():
    rng = np.random.default_rng(103)
    n = 3
    A = rng.standard_normal((n, n)) * 0.5
    B = rng.standard_normal((n, n)) * 0.5
    lam = Partition((2,))
    U = smp.haar_orthogonal_batch(n, _MC_SAMPLES, rng)

    def omega_batch(mats):
        eigs = np.linalg.eigvalsh(mats @ np.conjugate(np.transpose(mats, (0, 2, 1))))
        return (np.real(sf.jack_eval_batch(lam, 2, eigs))
                / sf.jack_at_identity(lam, 2, n))

    def omega(mat):
        eigs = np.linalg.eigvalsh(mat @ mat.T)
        return sf.jack_eval(lam, 2, list(eigs)) / sf.jack_at_identity(lam, 2, n)

    vals = omega_batch(A[None] @ U @ B[None])
    mean, se = vals.mean(), vals.std(ddof=1) / np.sqrt(vals.size)
    target = omega(A) * omega(B)
    dev = abs(mean - target) / se
    return dev <= 3.0, dev, 3.0, "int Omega(AUB) dU = Omega(A) Omega(B)"


@_check("sampling.zonal-symplectic-integral", "sampling", "c4")
def _zonal_symplectic():
    rng = np.random.default_rng(105)
    k = 2
    G = rng.standard_normal((2 * k, 2 * k)) + 1j * rng.standard_normal((2 * k, 2 * k))
    J = smp.symplectic_unit(k)
    A = 0.25 * (G - J @ G.conj() @ J)  # quaternion-structured, moderate norm
    U = smp.haar_symplectic_batch(k, _MC_SAMPLES, rng)
    lam = Partition((1,))
    vals = _schur_of_matrices(lam.union_self(), U @ A[None])
    mean, se = vals.mean(), vals.std(ddof=1) / np.sqrt(vals.size)
    aa = np.linalg.eigvalsh(A @ A.conj().T)
    dedup = 0.5 * (aa[0::2] + aa[1::2])
    target = (sf.jack_eval(lam, Fraction(1, 2), list(dedup))
              / sf.jack_at_identity(lam, Fraction(1, 2), k))
    dev = abs(mean - target) / se
    return dev <= 3.0, dev, 3.0, "S_{ll}(UA) MC vs quaternion zonal ratio"


@_check("sampling.odd-partition-vanishing", "sampling", "c4")
def _odd_vanishing():
    rng = np.random.default_rng(107)
    n = 3
    A = rng.standard_normal((n, n)) * 0.6
    U = smp.haar_orthogonal_batch(n, _MC_SAMPLES, rng)
    worst = 0.0
    for lam in (Partition((1,)), Partition((2, 1))):
        vals = _schur_of_matrices(lam, A @ U)
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        worst = max(worst, abs(vals.mean()) / se)
    k = 2
    G = rng.standard_normal((2 * k, 2 * k)) + 1j * rng.standard_normal((2 * k, 2 * k))
    J = smp.symplectic_unit(k)
    Aq = 0.25 * (G - J @ G.conj() @ J)
    Uq = smp.haar_symplectic_batch(k, _MC_SAMPLES, rng)
    for lam in (Partition((1,)), Partition((2,))):
        vals = _schur_of_matrices(lam, Uq @ Aq[None])
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        worst = max(worst, abs(vals.mean()) / se)
    return worst <= 3.0, worst, 3.0, "non-even / non-paired partitions average to 0"


@_check("sampling.haar-invariance", "sampling")
def _haar_invariance():
    rng = np.random.default_rng(109)
    n = 3
    V = smp.haar_orthogonal(n, rng)
    U = smp.haar_orthogonal_batch(n, _MC_SAMPLES, rng)
    VU = V[None] @ U
    worst = 0.0
    for f in (lambda M: M[:, 0, 0], lambda M: M[:, 0, 0] ** 2, lambda M: M[:, 1, 2] ** 2):
        a, b = f(U), f(VU)
        se = np.sqrt(a.var(ddof=1) / a.size + b.var(ddof=1) / b.size)
        worst = max(worst, abs(a.mean() - b.mean()) / se)
    # second moment of entries is forced to 1/n by symmetry
    m2 = (U**2).mean(axis=0)
    worst = max(worst, float(np.abs(m2 - 1.0 / n).max())
                / (np.sqrt(2.0 / n) / np.sqrt(_MC_SAMPLES) * 3))
    return worst <= 3.0, worst, 3.0, "U and VU moments agree; E[U_ij^2] = 1/n"


@_check("sampling.coset-extension-invariance", "sampling", "c4")
def _coset_extension():
    # multiplying the lower-right block by an embedded rotation leaves the
    # reflection block untouched sample-by-sample, and the PRE density too
    rng = np.random.default_rng(111)
    n, m = 1, 3
    spec = EnsembleSpec("PRE", n, m, (0.5,))
    S = smp.haar_special_orthogonal_batch(n + m, 5000, rng)
    W = np.eye(n + m)
    W2 = smp.haar_special_orthogonal(m - n, rng)
    W[n + 1:, n + 1:] = W2
    SW = S @ W[None]
    worst = 0.0
    for i in range(0, 5000, 500):
        r1 = smp.reflection_eigenvalues(S[i], spec)
        r2 = smp.reflection_eigenvalues(SW[i], spec)
        worst = max(worst, np.abs(r1 - r2).max())
        worst = max(worst, abs(smp.poisson_log_density(S[i], spec)
                               - smp.poisson_log_density(SW[i], spec)))
    return worst <= 1e-12, worst, 1e-12, "R and the kernel invariant under O(m-n) extension"


@_check("sampling.poisson-kernel-reduced-vs-full", "sampling")
def _poisson_reduced_full():
    rng = np.random.default_rng(113)
    worst = 0.0
    for kind, (n, m) in (("PRE", (2, 3)), ("PQE", (1, 2))):
        spec = EnsembleSpec(kind, n, m, tuple(rng.uniform(0.2, 0.7, size=n)))
        for _ in range(50):
            s = smp.sample_scattering(spec, rng)
            full = smp.poisson_density_full(s, spec)
            red = smp.poisson_density(s, spec)
            worst = max(worst, abs(full - red) / abs(full))
    return worst <= 1e-10, worst, 1e-10, "gamma_R = 0 collapses the determinant"


@_check("sampling.metropolis-gamma0-is-haar", "sampling")
def _metropolis_gamma0():
    spec = EnsembleSpec("PRE", 1, 2, (0.0,))
    cfg = smp.ChainConfig(seed=42, burn_in=100, thinning=1, samples=2000)
    R, rate = smp.reflection_samples(spec, cfg)
    err = abs(rate - 1.0)
    # R = r^2 with density (1/2) R^{-1/2} on [0,1]: mean sqrt(R) is 1/2
    mean_err = abs(np.sqrt(R).mean() - 0.5) / (np.sqrt(1.0 / 12.0 / R.size))
    ok = err == 0.0 and mean_err <= 4.0
    return ok, err, 0.0, "acceptance rate exactly 1, Haar moments match"


def _physics_check(spec, control=None, bins=40, samples=100_000, seed=202,
                   thinning=3):
    cfg = smp.ChainConfig(seed=seed, burn_in=2000, thinning=thinning,
                          samples=samples)
    R, rate = smp.reflection_samples(spec, cfg)
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(R.reshape(-1), bins=edges)
    total = R.size
    if control is not None:
        probs = analytic_bin_probabilities(control, edges, _POLICY)
    else:
        probs = analytic_bin_probabilities(spec, edges, _POLICY)
    sigma = np.maximum(smp.bin_probability_stderr(R, edges),
                       np.sqrt(probs * (1.0 - probs)) / total)  # floor: 1 count
    dev = np.abs(counts / total - probs) / sigma
    frac = float(np.mean(dev <= 3.0))
    return frac, rate


@_check("sampling.physics-pre", "sampling", "c9")
def _physics_pre():
    spec = EnsembleSpec("PRE", 1, 2, (0.5,))
    frac, rate = _physics_check(spec)
    return frac >= 0.95, 1.0 - frac, 0.05, f"bins within 3 sigma: {frac:.0%} (accept {rate:.2f})"


@_check("sampling.physics-pqe", "sampling", "c9")
def _physics_pqe():
    # the quaternion kernel spans a wide density range, so the chain needs
    # heavier thinning than the real ensemble before samples decorrelate
    spec = EnsembleSpec("PQE", 1, 1, (0.5,))
    frac, rate = _physics_check(spec, thinning=10)
    return frac >= 0.95, 1.0 - frac, 0.05, f"bins within 3 sigma: {frac:.0%} (accept {rate:.2f})"


@_check("sampling.physics-ideal-control", "sampling", "c9")
def _physics_control():
    worst_frac = 1.0
    for kind, ideal, (n, m) in (("PRE", "CRE", (1, 2)), ("PQE", "CQE", (1, 1))):
        spec = EnsembleSpec(kind, n, m, (0.0,))
        control = EnsembleSpec(ideal, n, m)
        frac, _ = _physics_check(spec, control=control, seed=203)
        worst_frac = min(worst_frac, frac)
    return worst_frac >= 0.95, 1.0 - worst_frac, 0.05, \
        f"gamma=0 chains match ideal densities ({worst_frac:.0%})"


@_check("sampling.empirical-density-sanity", "sampling")
def _empirical_sanity():
    rng = np.random.default_rng(115)
    flat = rng.uniform(0, 1, size=20_000)
    h = smp.empirical_density(flat, bins=20)
    dev = np.abs(np.asarray(h["density"]) - 1.0) / np.asarray(h["stderr"])
    frac = float(np.mean(dev <= 3.0))
    return frac >= 0.9, 1.0 - frac, 0.1, "uniform input gives a flat histogram"


@_check("sampling.kramers-pairing", "sampling")
def _kramers():
    rng = np.random.default_rng(117)
    spec = EnsembleSpec("PQE", 2, 2, (0.4,))
    worst = 0.0
    for _ in range(25):
        s = smp.sample_scattering(spec, rng)
        sv = np.linalg.svd(s.matrix[:4, :4], compute_uv=False)
        sv = np.sort(sv)[::-1]
        worst = max(worst, float(np.abs(sv[0::2] - sv[1::2]).max()))
        R = smp.reflection_eigenvalues(s, spec)
        t = np.linalg.svd(s.matrix[:4, 4:], compute_uv=False)
        t = 0.5 * (np.sort(t)[::-1][0::2] + np.sort(t)[::-1][1::2])
        # largest r pairs with smallest t: r_j^2 + t_j^2 = 1 channel-wise
        worst = max(worst, float(np.abs(np.sort(R) + np.sort(t**2)[::-1] - 1.0).max()))
    return worst <= 1e-10, worst, 1e-10, "double degeneracy and R_j + T_j = 1"


# ======================================================================
# pfaffian (criteria 10, 11, 12)
# ======================================================================

@_check("pfaffian.square-equals-determinant", "pfaffian", "c12")
def _pf_sq_det():
    rng = np.random.default_rng(119)
    worst = 0.0
    for dim in range(2, 13, 2):
        for _ in range(10):
            B = rng.standard_normal((dim, dim))
            A = B - B.T
            pf = pfm.pfaffian(A)
            det = np.linalg.det(A)
            worst = max(worst, abs(pf**2 - det) / max(1.0, abs(det)))
    return worst <= 1e-8, worst, 1e-8, "Pf^2 = det for random antisymmetric up to 12x12"


@_check("pfaffian.pf-antisymmetry", "pfaffian")
def _pf_antisym():
    rng = np.random.default_rng(121)
    B = rng.standard_normal((6, 6))
    A = B - B.T
    swapped = A.copy()
    swapped[[0, 2]] = swapped[[2, 0]]
    swapped[:, [0, 2]] = swapped[:, [2, 0]]
    err = abs(pfm.pfaffian(A) + pfm.pfaffian(swapped))
    err += abs(pfm.pfaffian(np.array([[0.0, 2.5], [-2.5, 0.0]])) - 2.5)
    A4 = np.array([[0, 1.0, 2, 3], [-1, 0, 4, 5], [-2, -4, 0, 6], [-3, -5, -6, 0]])
    err += abs(pfm.pfaffian(A4) - (1 * 6 - 2 * 5 + 3 * 4))
    return err <= 1e-12, err, 1e-12, "pair swap flips sign; 2x2 and 4x4 closed forms"


@_check("pfaffian.skew-orthogonality-by-quadrature", "pfaffian", "c12")
def _skew_table():
    sys = pfm.build_skew_orthogonal(8, 0.0, 0.0)

    # independent oracle: iterated Gauss-Legendre for <f,g>
    from numpy.polynomial.legendre import leggauss

    xg, wg = leggauss(40)

    def skew_quad(pc, qc):
        fv = np.polynomial.polynomial.polyval(xg, [float(c) for c in pc])
        total = 0.0
        for v, wv, f_at_v in zip(xg, wg, fv):
            u = 0.5 * (v + 1.0) * (xg + 1.0) - 1.0
            gu = np.polynomial.polynomial.polyval(u, [float(c) for c in qc])
            inner = 0.5 * (v + 1.0) * np.dot(wg, gu)
            u2 = 0.5 * (1.0 - v) * (xg + 1.0) + v
            gu2 = np.polynomial.polynomial.polyval(u2, [float(c) for c in qc])
            inner -= 0.5 * (1.0 - v) * np.dot(wg, gu2)
            total += wv * f_at_v * inner
        return -total  # sign(v - u) with u the inner variable

    worst = 0.0
    for i in range(9):
        for j in range(9):
            got = skew_quad(sys.coefficients[i], sys.coefficients[j])
            if i % 2 == 0 and j == i + 1:
                expect = float(sys.r[i // 2])
            elif j % 2 == 0 and i == j + 1:
                expect = -float(sys.r[j // 2])
            else:
                expect = 0.0
            worst = max(worst, abs(got - expect))
    return worst <= 1e-9, worst, 1e-9, "full pairing table vs iterated quadrature"


@_check("pfaffian.skew-moment-closed-form", "pfaffian")
def _skew_moment():
    worst = 0.0
    for (i, j) in [(0, 1), (1, 2), (0, 3), (2, 5)]:
        exact = float(pfm.skew_moments(i, j))
        quad = (pfm._skew_moment_quad(i, j, 0.0, 0.0)
                - pfm._skew_moment_quad(j, i, 0.0, 0.0))
        worst = max(worst, abs(exact - quad))
    diag = max(abs(float(pfm.skew_moments(i, i))) for i in range(5))
    m01 = abs(float(pfm.skew_moments(0, 1)) - 4.0 / 3.0)
    worst = max(worst, diag, m01)
    return worst <= 1e-10, worst, 1e-10, "flat-weight closed form vs quadrature; M_01 = 4/3"


@_check("pfaffian.char-poly-average-vs-quadrature", "pfaffian")
def _char_poly_avg():
    sys = pfm.build_skew_orthogonal(8, 0.0, 0.0)
    worst = 0.0
    for (p, n, v) in [(2, 1, [0.4]), (2, 2, [0.3, -0.2]), (4, 2, [0.35, -0.15]),
                      (2, 3, [0.5, 0.1, -0.3])]:
        got = pfm.char_poly_average(p, n, sys, v)
        ref = pfm.jacobi_char_poly_quadrature(p, v, 0.0, 0.0, m=60)
        worst = max(worst, abs(got - ref) / max(1.0, abs(ref)))
    swap = abs(pfm.char_poly_average(2, 2, sys, [-0.2, 0.3])
               - pfm.char_poly_average(2, 2, sys, [0.3, -0.2]))
    worst = max(worst, swap)
    return worst <= 1e-6, worst, 1e-6, "Pfaffian kernel vs direct beta=1 average (n even+odd)"


@_check("pfaffian.dual-representation-theorem", "pfaffian", "c10")
def _dual_representation():
    rng = np.random.default_rng(123)
    policy = TruncationPolicy(max_weight=200, rel_tol=1e-9)
    worst = 0.0
    for (n, m) in ((2, 2), (2, 3)):
        for g in (0.2, 0.5, 0.8):
            spec = EnsembleSpec("PQE", n, m, (g,))
            for _ in range(20):
                R = np.sort(rng.uniform(0.02, 0.98, size=n))
                while R[1] - R[0] < 0.04:
                    R = np.sort(rng.uniform(0.02, 0.98, size=n))
                series = jpdf_semi_ideal(spec, R, policy)
                pfv = pfm.jpdf_pqe_pfaffian(spec, R, policy)
                worst = max(worst, abs(series - pfv) / abs(series))
    return worst <= 1e-5, worst, 1e-5, "series vs Pfaffian density on 120 random spectra"


@_check("pfaffian.pqe-constant-chain", "pfaffian")
def _constant_chain():
    # the calibrated constant, divided by the printed chain, must not
    # depend on gamma (it only carries n- and p-dependent factors)
    n, m = 2, 2
    ratios = []
    for g in (0.2, 0.5, 0.8):
        spec = EnsembleSpec("PQE", n, m, (g,))
        R_ref = np.array([0.31, 0.72])
        cal = jpdf_semi_ideal(spec, R_ref, _POLICY) / pfm._pqe_raw(spec, R_ref)
        ratios.append(cal * pfm.pqe_constant_chain(spec))
    spread = (max(ratios) - min(ratios)) / abs(ratios[0])
    return spread <= 1e-8, spread, 1e-8, "calibration x chain is gamma-independent"


@_check("pfaffian.pre-beta4-integrals", "pfaffian", "c11")
def _pre_beta4():
    rng = np.random.default_rng(125)
    worst = 0.0
    for m in (2, 3):
        for n in (1, 2):
            spec = EnsembleSpec("PRE", n, m, (0.6,))
            R = np.sort(rng.uniform(0.1, 0.9, size=n))
            val, se = pfm.pre_integral_mc(spec, R, budget=400_000, rng=rng)
            a, b, c = -m / 2.0, -(m - 1) / 2.0, n / 2.0
            ref = hfma1(a, b, c, 2, 0.36 * R).value
            dev = abs(val - ref) / max(se, 1e-15)
            worst = max(worst, dev)
    return worst <= 3.0, worst, 3.0, "m even/odd integral forms vs terminating series"


@_check("pfaffian.pre-mc-at-zero", "pfaffian")
def _pre_mc_zero():
    spec = EnsembleSpec("PRE", 2, 2, (0.5,))
    val, se = pfm.pre_integral_mc(spec, [0.0, 0.0], budget=10_000, rng=4)
    err = abs(val - 1.0)
    return err == 0.0, err, 0.0, "self-normalized ratio is exactly 1 at R = 0"
