"""Self-contained numerical kernel: adaptive quadrature, an oscillatory
semi-infinite integrator, and the special functions the analytic modules need.

All integrands must be vectorized (accept an ndarray of abscissae and return
an ndarray of values). Everything here is pure and reentrant.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergenceError

__all__ = [
    "QuadratureSpec",
    "integrate",
    "integrate_oscillatory_semiinf",
    "erf",
    "erfc",
    "q_function",
    "gamma_fn",
    "lgamma",
    "kummer_1f1",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Error targets and budget for the adaptive integrators.

    truncation_point bounds semi-infinite integrals; when None, integrate()
    maps [a, inf) onto [0, 1) via x = a + t/(1-t) instead of truncating.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000
    truncation_point: float | None = None

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if self.truncation_point is not None and not self.truncation_point > 0:
            raise DomainError("truncation_point must be positive")


DEFAULT_SPEC = QuadratureSpec()

# 15-point Kronrod extension of the 7-point Gauss rule (positive half).
_XK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
])

# Full node vector on [-1, 1], ordered; Gauss sub-rule uses every odd index.
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
_WEIGHTS_G = np.zeros_like(_WEIGHTS_K)
_WEIGHTS_G[1:-1:2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a, b):
    """One Gauss-Kronrod panel on [a, b]: returns (kronrod, |kronrod - gauss|)."""
    half = 0.5 * (b - a)
    x = 0.5 * (a + b) + half * _NODES
    y = f(x)
    qk = half * np.sum(_WEIGHTS_K * y)
    qg = half * np.sum(_WEIGHTS_G * y)
    return qk, abs(qk - qg)


def integrate(f, a, b, spec: QuadratureSpec = DEFAULT_SPEC):
    """Adaptive Gauss-Kronrod integral of f over [a, b].

    b may be inf; the interval is then truncated at spec.truncation_point if
    given, otherwise mapped onto [0, 1) via x = a + t/(1-t). Integrable
    endpoint singularities (x^-g, g < 1) are resolved by bisection toward the
    endpoint since no node ever lands on a panel edge.

    Raises NonConvergenceError if the accumulated error estimate does not meet
    max(abs_tol, rel_tol*|I|) within spec.max_subdivisions bisections.
    """
    if math.isinf(b):
        if spec.truncation_point is not None:
            b = a + spec.truncation_point
        else:
            inner = f

            def f(t, _f=inner, _a=a):
                u = 1.0 - t
                return _f(_a + t / u) / (u * u)

            a, b = 0.0, 1.0
    if not a < b:
        raise DomainError(f"integration bounds must satisfy a < b, got [{a}, {b}]")

    val, err = _gk15(f, a, b)
    heap = [(-err, 0, a, b, val, err)]
    total, total_err = val, err
    counter = 0
    for _ in range(spec.max_subdivisions):
        if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
            return total
        neg_err, _, lo, hi, v, e = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += (v1 + v2) - v
        total_err += (e1 + e2) - e
        counter += 1
        heapq.heappush(heap, (-e1, 2 * counter, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, 2 * counter + 1, mid, hi, v2, e2))
    if total_err <= max(spec.abs_tol, spec.rel_tol * abs(total)):
        return total
    raise NonConvergenceError(
        f"quadrature error {total_err:.3e} above target after "
        f"{spec.max_subdivisions} subdivisions (I ~ {total:.6e})"
    )


def _euler_accelerate(partials):
    """Iterated-mean acceleration of a sequence of partial sums.

    Effective when the underlying panel sums alternate in sign, as they do for
    the half-period panels of a decaying oscillatory integrand. Returns
    (limit estimate, error estimate).
    """
    row = np.asarray(partials, dtype=complex)
    prev = row[-1]
    while row.size > 1:
        row = 0.5 * (row[:-1] + row[1:])
        cur = row[-1]
        if abs(cur - prev) < 1e-17:
            return cur, abs(cur - prev)
        prev = cur
    return prev, abs(prev - np.asarray(partials, dtype=complex)[-1])


def integrate_oscillatory_semiinf(
    f,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    tail_period: float = math.pi,
    head_width: float | None = None,
    head_span: float | None = None,
):
    """Evaluate integral of f(s)/s over s in (0, inf) for oscillatory f.

    f must be vectorized, with f(s)/s finite as s -> 0+ and |f| -> 0 for large
    s. The axis is cut into panels of width tail_period (ideally the
    half-period of the dominant oscillation, pi / phase rate); an optional
    denser head region [0, head_span] with panel width head_width resolves
    fast transient phases. Each panel is integrated adaptively.

    The panel series is summed until either three consecutive panels are
    negligible against the running total (decaying integrand) or iterated
    averaging of the partial sums converges (slowly decaying alternating
    tail). Returns (value, error_estimate).

    Raises NonConvergenceError if spec.truncation_point (default: 100000
    panels) is exhausted before the tail estimate meets the tolerance.
    """

    def g(s):
        return f(s) / s

    panel_spec = QuadratureSpec(
        abs_tol=0.125 * spec.abs_tol,
        rel_tol=spec.rel_tol,
        max_subdivisions=spec.max_subdivisions,
    )
    s_max = spec.truncation_point if spec.truncation_point is not None else 1e5 * tail_period

    total = 0.0 + 0.0j
    lo = 0.0
    # Dense head panels resolve transient phase structure near s = 0.
    if head_width is not None and head_span is not None and head_width < tail_period:
        while lo < head_span:
            hi = min(lo + head_width, head_span)
            total += integrate(g, lo, hi, panel_spec)
            lo = hi

    small_run = 0
    partials = []
    while lo < s_max:
        hi = lo + tail_period
        piece = integrate(g, lo, hi, panel_spec)
        total += piece
        partials.append(total)
        tol = max(spec.abs_tol, spec.rel_tol * abs(total))
        if abs(piece) < 0.25 * tol:
            small_run += 1
            if small_run >= 3:
                return complex(total), 3.0 * abs(piece)
        else:
            small_run = 0
        # Uniform half-period panels alternate in sign once phases settle, so
        # iterated averaging of the partial sums converges even when the
        # envelope decays only algebraically.
        if len(partials) >= 24 and len(partials) % 8 == 0:
            est, err = _euler_accelerate(partials[-24:])
            if err < tol:
                return complex(est), err
        lo = hi
    raise NonConvergenceError(
        f"oscillatory tail not converged by s = {s_max:.3e} "
        f"(running total {total:.6e})"
    )


# -- special functions -------------------------------------------------------

def erf(x: float) -> float:
    """Error function; accurate to better than 1e-12 everywhere."""
    return math.erf(x)


def erfc(x: float) -> float:
    """Complementary error function."""
    return math.erfc(x)


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = 0.5 * erfc(x / sqrt(2))."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def gamma_fn(x: float) -> float:
    """Gamma function; rejects the poles at non-positive integers."""
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"gamma undefined at non-positive integer {x}")
    return math.gamma(x)


def lgamma(x: float) -> float:
    """Log-gamma for x > 0 (used for stable Gamma-moment ratios)."""
    if x <= 0:
        raise DomainError(f"lgamma requires x > 0, got {x}")
    return math.lgamma(x)


def _check_1f1_b(b: float):
    if b <= 0 and abs(b - round(b)) < 1e-12:
        raise DomainError(f"1F1 undefined for non-positive integer b = {b}")


def _series_1f1(a, b, x, max_terms):
    """Plain power series of 1F1 over an ndarray x; stable for x >= 0 and
    acceptable for small |x| < 0."""
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for k in range(max_terms):
        term = term * ((a + k) / ((b + k) * (k + 1.0))) * x
        acc = acc + term
        if np.all(np.abs(term) <= 1e-16 * np.abs(acc)):
            break
    return acc

def _asymptotic_1f1_neg(a, b, x):
    """Large negative argument expansion; returns (values, ok mask).

    1F1(a;b;x) ~ Gamma(b)/Gamma(b-a) * (-x)^-a * sum_k (a)_k (a-b+1)_k / (k! (-x)^k)
    for x -> -inf; the series is truncated at its smallest term. Callers must
    exclude non-positive-integer b-a (Gamma pole; the transformed series
    terminates there instead).
    """
    z = -x
    pref = math.gamma(b) / math.gamma(b - a) * z ** (-a)
    term = np.ones_like(z)
    acc = np.ones_like(z)
    best = np.full_like(z, np.inf)
    ok = np.zeros(z.shape, dtype=bool)
    frozen = np.zeros(z.shape, dtype=bool)
    for k in range(60):
        nxt = term * ((a + k) * (a - b + 1.0 + k) / ((k + 1.0) * z))
        growing = np.abs(nxt) >= np.abs(term)
        frozen |= growing
        upd = ~frozen
        acc = np.where(upd, acc + nxt, acc)
        term = np.where(upd, nxt, term)
        best = np.minimum(best, np.abs(term))
        done = np.abs(term) <= 1e-14 * np.abs(acc)
        ok |= done
        frozen |= done
        if np.all(frozen):
            break
    ok |= best <= 1e-12 * np.abs(acc)
    return pref * acc, ok


def kummer_1f1(a: float, b: float, x):
    """Confluent hypergeometric 1F1(a; b; x) for real arguments.

    Accepts a scalar or ndarray x. Negative arguments are evaluated through
    the Kummer transformation 1F1(a;b;x) = e^x 1F1(b-a;b;-x), whose series has
    non-negative terms, avoiding the cancellation of the alternating direct
    series; very negative arguments use the standard asymptotic expansion with
    the transformed series as fallback. Relative accuracy target 1e-10.
    """
    _check_1f1_b(b)
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr).astype(float)
    out = np.empty_like(arr)

    pos = arr >= 0.0
    if np.any(pos):
        xs = arr[pos]
        out[pos] = _series_1f1(a, b, xs, max_terms=int(2 * xs.max() + 600))

    neg = ~pos
    if np.any(neg):
        xs = arr[neg]
        res = np.empty_like(xs)
        todo = np.ones(xs.shape, dtype=bool)
        # When b - a is a non-positive integer the transformed series
        # terminates (e^x times a polynomial); the asymptotic prefactor
        # Gamma(b)/Gamma(b-a) sits on a pole and must not be used.
        ba_int = b - a <= 0 and abs((b - a) - round(b - a)) < 1e-12
        far = xs <= -60.0 if not ba_int else np.zeros(xs.shape, dtype=bool)
        if np.any(far):
            vals, ok = _asymptotic_1f1_neg(a, b, xs[far])
            idx = np.flatnonzero(far)
            res[idx[ok]] = vals[ok]
            todo[idx[ok]] = False
        if np.any(todo):
            xs_t = xs[todo]
            # Kummer transform: all series terms are non-negative.
            res[todo] = np.exp(xs_t) * _series_1f1(
                b - a, b, -xs_t, max_terms=int(2 * (-xs_t).max() + 600)
            )
        out[neg] = res

    return float(out[0]) if scalar else out.reshape(np.shape(x))
