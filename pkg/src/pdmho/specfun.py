"""
Special functions and quadrature used by the confined oscillator model.

Polynomial families are evaluated by their three-term recurrences. The
hypergeometric sums are kept for small-degree cross checks only. Every
function accepts a scalar or an array argument and returns the same shape.
Factorial ratios go through log-space helpers since ``(l+m)!`` leaves the
double range near ``l ~ 85``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ddouble import dd_add, dd_div, dd_mul, dd_to_float, two_sum
from .errors import DomainError

__all__ = [
    "QuadratureRule",
    "hermite",
    "gegenbauer",
    "gegenbauer_derivative",
    "assoc_legendre",
    "assoc_legendre_2f1",
    "hermite_2f0",
    "gegenbauer_2f1",
    "hyp2f1_terminating",
    "gauss_legendre_rule",
    "log_factorial",
    "log_pochhammer",
    "pochhammer",
]

MAX_QUADRATURE_ORDER = 512

# ln(n!) for n <= 20 is exact in double precision via the integer product.
_LOG_FACTORIAL_TABLE = tuple(math.log(math.factorial(n)) for n in range(21))


def _check_degree(n, name="n"):
    if int(n) != n or n < 0:
        raise DomainError(f"{name} must be a non-negative integer, got {n!r}")
    return int(n)


def _check_lambda(lam):
    if not lam > -0.5 or lam == 0:
        raise DomainError(f"Gegenbauer parameter must satisfy lambda > -1/2, lambda != 0; got {lam!r}")


def log_factorial(n):
    """Natural log of ``n!``; table lookup up to 20, ``lgamma`` beyond."""
    n = _check_degree(n)
    if n < len(_LOG_FACTORIAL_TABLE):
        return _LOG_FACTORIAL_TABLE[n]
    return math.lgamma(n + 1.0)


def pochhammer(a, k):
    """Rising factorial ``(a)_k = a (a+1) ... (a+k-1)``, with ``(a)_0 = 1``."""
    k = _check_degree(k, "k")
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def log_pochhammer(a, k):
    """``ln (a)_k`` for ``a > 0``."""
    k = _check_degree(k, "k")
    if a <= 0:
        raise DomainError(f"log_pochhammer needs a > 0, got {a!r}")
    return math.lgamma(a + k) - math.lgamma(a)


def hermite(n, x):
    """Physicists' Hermite polynomial ``H_n(x)``.

    Uses ``H_{k+1} = 2x H_k - 2k H_{k-1}`` starting from ``H_0 = 1`` and
    ``H_1 = 2x``.
    """
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    prev = x * 0.0 + 1.0
    if n == 0:
        return prev[()]
    cur = 2.0 * x
    for k in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
    return cur[()]


def gegenbauer(n, lam, x):
    """Gegenbauer (ultraspherical) polynomial ``C_n^{(lam)}(x)``.

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    lam : float
        Parameter, ``lam > -1/2`` and ``lam != 0``.
    x : float or array_like
        Argument.

    Returns
    -------
    float or ndarray
        Value from ``k C_k = 2(k+lam-1) x C_{k-1} - (k+2lam-2) C_{k-2}``.
    """
    n = _check_degree(n)
    _check_lambda(lam)
    x = np.asarray(x, dtype=float)
    prev = x * 0.0 + 1.0
    if n == 0:
        return prev[()]
    cur = 2.0 * lam * x
    for k in range(2, n + 1):
        prev, cur = cur, (2.0 * (k + lam - 1.0) * x * cur - (k + 2.0 * lam - 2.0) * prev) / k
    return cur[()]


def gegenbauer_derivative(n, lam, x):
    """``d/dx C_n^{(lam)}(x) = 2 lam C_{n-1}^{(lam+1)}(x)``."""
    n = _check_degree(n)
    _check_lambda(lam)
    x = np.asarray(x, dtype=float)
    if n == 0:
        return (x * 0.0)[()]
    return 2.0 * lam * gegenbauer(n - 1, lam + 1.0, x)


def _check_legendre_args(l, m, xi):
    l = _check_degree(l, "l")
    if int(m) != m or not 0 <= m <= l:
        raise DomainError(f"order m must be an integer in 0..{l}, got {m!r}")
    xi = np.asarray(xi, dtype=float)
    if np.any(np.abs(xi) > 1.0):
        raise DomainError("associated Legendre argument must lie in [-1, 1]")
    return l, int(m), xi


def assoc_legendre(l, m, xi):
    """Associated Legendre function ``P_l^m(xi)`` on ``[-1, 1]``.

    Evaluated through the Gegenbauer polynomial ``C_{l-m}^{(m+1/2)}``; the
    factorial prefactor ``(l+m)! / (2^m m! (2m+1)_{l-m})`` is assembled in
    log-space. The ``(-1)^m`` phase is included.
    """
    l, m, xi = _check_legendre_args(l, m, xi)
    log_pref = (
        log_factorial(l + m)
        - m * math.log(2.0)
        - log_factorial(m)
        - log_pochhammer(2 * m + 1.0, l - m)
    )
    sign = -1.0 if m % 2 else 1.0
    weight = (1.0 - xi * xi) ** (0.5 * m)
    return sign * math.exp(log_pref) * weight * gegenbauer(l - m, m + 0.5, xi)


def _as_dd(v):
    if isinstance(v, tuple):
        return v
    return (float(v), 0.0)


def _hyp2f1_dd(big_n, b, c, z):
    z = _as_dd(z)
    term = (1.0, 0.0)
    total = (1.0, 0.0)
    for k in range(big_n):
        num = dd_mul((float(k - big_n), 0.0), two_sum(b, float(k)))
        if num[0] == 0.0:
            break
        den = dd_mul(two_sum(c, float(k)), (k + 1.0, 0.0))
        term = dd_mul(dd_mul(term, dd_div(num, den)), z)
        total = dd_add(total, term)
    return total


def hyp2f1_terminating(neg_n, b, c, z, compensated=False):
    """Terminating Gauss series ``2F1(-N, b; c; z)``.

    The sum runs over ``k = 0..N`` with each term built from the previous
    one. A zero numerator factor ends the loop early.

    With ``compensated=True`` the running product and sum are carried in
    double-double arithmetic and ``(hi, lo)`` is returned; ``z`` may then
    itself be a ``(hi, lo)`` pair. This is for badly conditioned sums
    (terms far larger than the result); scalars only.
    """
    if int(neg_n) != neg_n or neg_n > 0:
        raise DomainError(f"first numerator parameter must be a non-positive integer, got {neg_n!r}")
    big_n = -int(neg_n)
    for k in range(big_n):
        if c + k == 0:
            raise DomainError(f"denominator parameter c={c!r} hits a pole before termination")
        if b + k == 0:
            break
    if compensated:
        return _hyp2f1_dd(big_n, float(b), float(c), z)
    z = np.asarray(z, dtype=float)
    term = z * 0.0 + 1.0
    total = term.copy()
    for k in range(big_n):
        num = (k - big_n) * (b + k)
        if num == 0:
            break
        term = term * (num / ((c + k) * (k + 1.0))) * z
        total = total + term
    return total[()]


def hermite_2f0(n, x):
    """``H_n(x) = (2x)^n 2F0(-n/2, -(n-1)/2; ; -1/x^2)``, written as its finite sum.

    Cross-check only. Expanded as ``sum_j (-1)^j n! / (j! (n-2j)!) (2x)^{n-2j}``
    so that ``x = 0`` needs no special casing.
    """
    n = _check_degree(n)
    x = np.asarray(x, dtype=float)
    total = x * 0.0
    for j in range(n // 2 + 1):
        coef = (-1) ** j * math.factorial(n) / (math.factorial(j) * math.factorial(n - 2 * j))
        total = total + coef * (2.0 * x) ** (n - 2 * j)
    return total[()]


def _series_at_half_gap(neg_n, b, c, x, compensated):
    """``2F1(neg_n, b; c; (1-x)/2)`` over an array of ``x``.

    Near ``x = -1`` the series alternates with terms far above the result;
    the compensated path sums each point in double-double with ``(1-x)/2``
    formed exactly.
    """
    if not compensated:
        return hyp2f1_terminating(neg_n, b, c, (1.0 - x) / 2.0)
    out = np.empty(x.shape)
    for idx, xv in np.ndenumerate(x):
        hi, lo = two_sum(1.0, -float(xv))
        out[idx] = dd_to_float(hyp2f1_terminating(neg_n, b, c, (0.5 * hi, 0.5 * lo), compensated=True))
    return out[()]


def gegenbauer_2f1(n, lam, x, compensated=True):
    """Gegenbauer polynomial from its hypergeometric form.

    ``C_n^{(lam)}(x) = (2lam)_n / n! * 2F1(-n, n+2lam; lam+1/2; (1-x)/2)``.
    Cross-check only.
    """
    n = _check_degree(n)
    _check_lambda(lam)
    x = np.asarray(x, dtype=float)
    pref = pochhammer(2.0 * lam, n) / math.factorial(n)
    return pref * _series_at_half_gap(-n, n + 2.0 * lam, lam + 0.5, x, compensated)


def assoc_legendre_2f1(l, m, xi, compensated=True):
    """``P_l^m`` from its ``2F1`` definition; cross-check for small ``l``."""
    l, m, xi = _check_legendre_args(l, m, xi)
    pref = (-1.0) ** m * math.factorial(l + m) / (2.0**m * math.factorial(l - m) * math.factorial(m))
    series = _series_at_half_gap(m - l, l + m + 1.0, m + 1.0, xi, compensated)
    return pref * (1.0 - xi * xi) ** (0.5 * m) * series


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on ``[-1, 1]``.

    Arrays are made read-only on construction.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)

    def integrate(self, func, lo=-1.0, hi=1.0):
        """Apply the rule to ``func`` mapped affinely onto ``[lo, hi]``."""
        half = 0.5 * (hi - lo)
        x = 0.5 * (hi + lo) + half * self.nodes
        return half * np.dot(self.weights, func(x))


def _legendre_with_derivative(n, x):
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def gauss_legendre_rule(order):
    """Gauss-Legendre rule of the given order (1..512).

    Positive roots of ``P_order`` are found by Newton iteration from the
    cosine guesses ``cos(pi (i - 1/4) / (order + 1/2))`` and mirrored, so
    the rule is exactly symmetric. Weights are ``2 / ((1 - x^2) P'(x)^2)``.
    """
    if int(order) != order or not 1 <= order <= MAX_QUADRATURE_ORDER:
        raise DomainError(f"quadrature order must be in 1..{MAX_QUADRATURE_ORDER}, got {order!r}")
    order = int(order)
    if order == 1:
        return QuadratureRule(1, np.array([0.0]), np.array([2.0]))
    half = order // 2
    i = np.arange(1, half + 1)
    x = np.cos(np.pi * (i - 0.25) / (order + 0.5))
    for _ in range(100):
        p, dp = _legendre_with_derivative(order, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-15:
            break
    else:
        raise RuntimeError(f"Gauss-Legendre Newton iteration did not converge for order {order}")
    _, dp = _legendre_with_derivative(order, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # x is descending; assemble ascending nodes
    if order % 2:
        _, dp0 = _legendre_with_derivative(order, np.array([0.0]))
        w0 = 2.0 / dp0**2
        nodes = np.concatenate([-x, [0.0], x[::-1]])
        weights = np.concatenate([w, w0, w[::-1]])
    else:
        nodes = np.concatenate([-x, x[::-1]])
        weights = np.concatenate([w, w[::-1]])
    return QuadratureRule(order, nodes, weights)
