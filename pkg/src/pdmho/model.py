"""
Confined harmonic oscillator with position-dependent mass and frequency.

The mass ``M(x) = a^4 m0 / (a^2 - x^2)^2`` and frequency
``w(x) = w0 (a^2 - x^2) / a^2`` keep ``M w^2 = m0 w0^2`` constant, so the
potential stays ``k x^2 / 2``. Normalizable solutions of the BenDaniel-Duke
equation exist only for quantized half-widths ``a_l`` (``l >= 2``), and each
``a_l`` carries the ``l - 1`` bound states ``m = 2..l``.

Wavefunctions are evaluated in the reduced variable ``xi = x / a``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NotNormalizableError
from .specfun import gegenbauer, gegenbauer_derivative, assoc_legendre, hermite, log_factorial

__all__ = [
    "PhysicalParams",
    "UNIT_PARAMS",
    "ConfinedModel",
    "StateLabel",
    "Level",
    "DimensionlessForm",
    "GridFunction",
    "Wavefunction",
    "HermiteWavefunction",
    "confinement_length",
    "mass_profile",
    "reciprocal_mass",
    "frequency_profile",
    "potential",
    "energy",
    "energy_level",
    "energy_by_n",
    "spectrum",
    "wavefunction",
    "wavefunction_legendre",
    "hermite_energy",
    "hermite_wavefunction",
    "ode_residual",
    "dimensionless_reduce",
]

DEFAULT_L_MAX = 200


@dataclass(frozen=True)
class PhysicalParams:
    """Mass ``m0``, angular frequency ``omega0`` and ``hbar``; ``k`` is derived."""

    m0: float = 1.0
    omega0: float = 1.0
    hbar: float = 1.0
    k: float = field(init=False)

    def __post_init__(self):
        for name in ("m0", "omega0", "hbar"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        object.__setattr__(self, "k", self.m0 * self.omega0**2)

    @property
    def length_scale(self):
        """Oscillator length ``sqrt(hbar / (m0 omega0))``."""
        return math.sqrt(self.hbar / (self.m0 * self.omega0))


UNIT_PARAMS = PhysicalParams()


def _check_l(l, l_max=None):
    if int(l) != l or l < 2:
        raise DomainError(f"l must be an integer >= 2, got {l!r}")
    if l_max is not None and l > l_max:
        raise DomainError(f"l={l} exceeds the configured cap l_max={l_max}")
    return int(l)


def confinement_length(l, params=UNIT_PARAMS):
    """Quantized half-width ``a_l = sqrt(hbar/(m0 w0)) [l(l+1) - 2]^{1/4}``."""
    l = _check_l(l)
    return params.length_scale * (l * (l + 1) - 2) ** 0.25


@dataclass(frozen=True)
class ConfinedModel:
    """A confinement index ``l`` together with its physical constants.

    ``a`` is filled in from :func:`confinement_length`. ``l_max`` guards
    against labels whose grids and normalizations become impractical.
    """

    l: int
    params: PhysicalParams = UNIT_PARAMS
    l_max: int = field(default=DEFAULT_L_MAX, compare=False, repr=False)
    a: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "l", _check_l(self.l, self.l_max))
        object.__setattr__(self, "a", confinement_length(self.l, self.params))

    @property
    def bound_orders(self):
        """Orders ``m`` of the bound states, ground state first."""
        return list(range(self.l, 1, -1))

    def xi(self, x):
        return np.asarray(x, dtype=float) / self.a


@dataclass(frozen=True)
class StateLabel:
    """State index ``(l, m)``; ``n = l - m`` counts the nodes."""

    l: int
    m: int

    def __post_init__(self):
        _check_l(self.l)
        if int(self.m) != self.m or not 0 <= self.m <= self.l:
            raise DomainError(f"m must be an integer in 0..{self.l}, got {self.m!r}")

    @classmethod
    def from_n(cls, l, n):
        return cls(l, l - n)

    @property
    def n(self):
        return self.l - self.m

    @property
    def bound(self):
        return self.m >= 2


class Level(NamedTuple):
    l: int
    m: int
    n: int
    energy: float
    bound: bool


@dataclass(frozen=True)
class DimensionlessForm:
    """Coefficients of the reduced equation in ``xi = x / a``.

    ``c0 = 2 m0 a^2 E / hbar^2`` and ``c2 = m0^2 w0^2 a^4 / hbar^2``.
    """

    a: float
    c0: float
    c2: float

    def xi(self, x):
        return np.asarray(x, dtype=float) / self.a

    def quantization_residuals(self, l, m):
        """``(|c2 + 2 - l(l+1)|, |c2 - c0 + 1 - m^2|)``."""
        return abs(self.c2 + 2.0 - l * (l + 1)), abs(self.c2 - self.c0 + 1.0 - m * m)


@dataclass(frozen=True)
class GridFunction:
    """Real function sampled on strictly increasing abscissae."""

    interval: tuple
    abscissae: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.abscissae, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if x.shape != v.shape or x.ndim != 1:
            raise ValueError("abscissae and values must be 1-d arrays of equal length")
        if x.size > 1 and np.any(np.diff(x) <= 0):
            raise ValueError("abscissae must be strictly increasing")
        lo, hi = self.interval
        if x.size and (x[0] < lo or x[-1] > hi):
            raise ValueError("abscissae must lie within the interval")
        object.__setattr__(self, "abscissae", x)
        object.__setattr__(self, "values", v)


def _inside(x, a):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > a):
        raise DomainError(f"position outside the confinement interval [-{a}, {a}]")
    return x


def reciprocal_mass(x, model):
    """``1 / M(x) = (a^2 - x^2)^2 / (a^4 m0)``; exactly 0 at the walls."""
    a = model.a
    x = _inside(x, a)
    return ((a * a - x * x) ** 2 / (a**4 * model.params.m0))[()]


def mass_profile(x, model):
    """Effective mass ``M(x)``; ``inf`` at ``|x| = a``."""
    a = model.a
    x = _inside(x, a)
    gap = (a * a - x * x) ** 2
    with np.errstate(divide="ignore"):
        out = np.where(gap > 0, a**4 * model.params.m0 / np.where(gap > 0, gap, 1.0), np.inf)
    return out[()]


def frequency_profile(x, model):
    """Angular frequency ``w(x) = w0 (a^2 - x^2) / a^2``; zero at the walls."""
    a = model.a
    x = _inside(x, a)
    return (model.params.omega0 * (a * a - x * x) / (a * a))[()]


def potential(x, params=UNIT_PARAMS):
    """Undeformed harmonic potential ``k x^2 / 2``."""
    x = np.asarray(x, dtype=float)
    return (0.5 * params.k * x * x)[()]


def _check_m(l, m):
    if int(m) != m or not 0 <= m <= l:
        raise DomainError(f"m must be an integer in 0..{l}, got {m!r}")
    return int(m)


def energy(l, m, params=UNIT_PARAMS):
    """``E_{l,m} = (hbar w0 / 2) (l(l+1) - m^2 - 1) / sqrt(l(l+1) - 2)``.

    Defined for every ``m`` in ``0..l``; only ``m >= 2`` are bound states
    (see :func:`energy_level`).
    """
    l = _check_l(l)
    m = _check_m(l, m)
    ll = l * (l + 1)
    return 0.5 * params.hbar * params.omega0 * (ll - m * m - 1) / math.sqrt(ll - 2)


def energy_level(l, m, params=UNIT_PARAMS):
    """:func:`energy` together with the label and its bound-state flag."""
    e = energy(l, m, params)
    return Level(int(l), int(m), int(l - m), e, m >= 2)


def spectrum(l, params=UNIT_PARAMS):
    """All ``l + 1`` levels ``m = l..0``, lowest energy first."""
    return [energy_level(l, m, params) for m in range(l, -1, -1)]


def energy_by_n(l, n, params=UNIT_PARAMS):
    """Bound-state energy indexed by ``n = l - m`` (``0 <= n <= l - 2``).

    Evaluates the rearranged closed form
    ``hbar w0 sqrt(1 + (3 hbar / (2 m0 w0 a^2))^2) (n + 1/2)
    - hbar^2 (n + 1/2)^2 / (2 m0 a^2) - 5 hbar^2 / (8 m0 a^2)``.
    """
    l = _check_l(l)
    if int(n) != n or not 0 <= n <= l - 2:
        raise DomainError(f"n must be an integer in 0..{l - 2}, got {n!r}")
    m0, w0, hbar = params.m0, params.omega0, params.hbar
    a2 = confinement_length(l, params) ** 2
    nh = n + 0.5
    root = math.sqrt(1.0 + (1.5 * hbar / (m0 * w0 * a2)) ** 2)
    return hbar * w0 * root * nh - hbar**2 * nh * nh / (2.0 * m0 * a2) - 5.0 * hbar**2 / (8.0 * m0 * a2)


def hermite_energy(n, params=UNIT_PARAMS):
    """Unconfined oscillator level ``hbar w0 (n + 1/2)``."""
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    return params.hbar * params.omega0 * (n + 0.5)


class Wavefunction:
    """Orthonormal bound state ``psi_{l,m}`` of a :class:`ConfinedModel`.

    ``psi(x) = A (1 - xi^2)^{(m-1)/2} C_{l-m}^{(m+1/2)}(xi)`` with
    ``xi = x / a`` and ``ln A`` accumulated from log-factorials. Calling the
    object evaluates ``psi``; :meth:`derivatives` gives ``psi, psi', psi''``
    in ``x``.
    """

    def __init__(self, l, m, model):
        if model.l != l:
            raise DomainError(f"state l={l} does not belong to a model with l={model.l}")
        m = _check_m(l, m)
        if m < 2:
            raise NotNormalizableError(
                f"m={m}: the state is not normalizable and does not vanish at the walls (need m >= 2)"
            )
        self.l, self.m, self.model = l, m, model
        self.n = l - m
        self.lam = m + 0.5
        self.power = 0.5 * (m - 1)
        self.log_norm = (
            log_factorial(2 * m)
            - m * math.log(2.0)
            - log_factorial(m)
            + 0.5 * (math.log(m) + log_factorial(l - m) - math.log(model.a) - log_factorial(l + m))
        )
        self.norm = math.exp(self.log_norm)

    def __repr__(self):
        return f"Wavefunction(l={self.l}, m={self.m}, a={self.model.a:.6g})"

    @property
    def energy(self):
        return energy(self.l, self.m, self.model.params)

    def _weight(self, xi):
        s = 1.0 - xi * xi
        # walls are an exact zero, never log(0)
        return np.where(s > 0, np.abs(s) ** self.power, 0.0)

    def of_xi(self, xi):
        xi = np.asarray(xi, dtype=float)
        if np.any(np.abs(xi) > 1.0):
            raise DomainError("reduced coordinate outside [-1, 1]")
        return (self.norm * self._weight(xi) * gegenbauer(self.n, self.lam, xi))[()]

    def __call__(self, x):
        x = _inside(x, self.model.a)
        return self.of_xi(x / self.model.a)

    def derivatives(self, x):
        """``(psi, dpsi/dx, d2psi/dx2)`` at interior points."""
        a = self.model.a
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) >= a):
            raise DomainError("derivatives are only defined strictly inside the walls")
        xi = x / a
        s = 1.0 - xi * xi
        p, n, lam = self.power, self.n, self.lam
        w = s**p
        dw = -2.0 * p * xi * s ** (p - 1.0)
        d2w = -2.0 * p * s ** (p - 1.0) + 4.0 * p * (p - 1.0) * xi * xi * s ** (p - 2.0)
        c = gegenbauer(n, lam, xi)
        dc = gegenbauer_derivative(n, lam, xi)
        d2c = gegenbauer_derivative(n - 1, lam + 1.0, xi) * 2.0 * lam if n >= 1 else xi * 0.0
        f = self.norm
        psi = f * w * c
        dpsi = f * (dw * c + w * dc) / a
        d2psi = f * (d2w * c + 2.0 * dw * dc + w * d2c) / (a * a)
        return psi, dpsi, d2psi


def wavefunction(l, m, model=None):
    """Bound-state evaluator ``x -> psi_{l,m}(x)``; rejects ``m < 2``."""
    if model is None:
        model = ConfinedModel(l)
    return Wavefunction(l, m, model)


def wavefunction_legendre(l, m, model, x):
    """``psi_{l,m}`` through the associated Legendre function.

    ``sqrt(m (l-m)! / (a (l+m)!)) (1 - xi^2)^{-1/2} P_l^m(xi)``; interior
    points only. This form carries an extra ``(-1)^m`` relative to
    :class:`Wavefunction`.
    """
    a = model.a
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= a):
        raise DomainError("Legendre form is evaluated at interior points only")
    xi = x / a
    log_c = 0.5 * (math.log(m) + log_factorial(l - m) - math.log(a) - log_factorial(l + m))
    return (math.exp(log_c) * assoc_legendre(l, m, xi) / np.sqrt(1.0 - xi * xi))[()]


class HermiteWavefunction:
    """Unconfined oscillator eigenfunction ``psi_n``."""

    def __init__(self, n, params=UNIT_PARAMS):
        if int(n) != n or n < 0:
            raise DomainError(f"n must be a non-negative integer, got {n!r}")
        self.n, self.params = int(n), params
        self.alpha = params.m0 * params.omega0 / params.hbar
        self.log_norm = -0.5 * (self.n * math.log(2.0) + log_factorial(self.n)) + 0.25 * math.log(self.alpha / math.pi)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return (
            np.exp(self.log_norm - 0.5 * self.alpha * x * x) * hermite(self.n, math.sqrt(self.alpha) * x)
        )[()]


def hermite_wavefunction(n, params=UNIT_PARAMS):
    return HermiteWavefunction(n, params)


def ode_residual(l, m, model, x):
    """Relative residual of the position-dependent-mass equation.

    Plugs the analytic ``psi_{l,m}`` into
    ``psi'' - (M'/M) psi' + (2M/hbar^2)(E - k x^2 / 2) psi`` with
    ``M'/M = 4x / (a^2 - x^2)`` and divides by
    ``max(|psi''|, (2M/hbar^2)|E||psi|, 1e-300)``.
    """
    wf = Wavefunction(l, m, model)
    a, params = model.a, model.params
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) >= a):
        raise DomainError("ODE residual is only defined strictly inside the walls")
    psi, dpsi, d2psi = wf.derivatives(x)
    e = wf.energy
    gap = a * a - x * x
    two_m = 2.0 * a**4 * params.m0 / (gap * gap * params.hbar**2)
    res = d2psi - (4.0 * x / gap) * dpsi + two_m * (e - 0.5 * params.k * x * x) * psi
    scale = np.maximum(np.maximum(np.abs(d2psi), two_m * abs(e) * np.abs(psi)), 1e-300)
    return (res / scale)[()]


def dimensionless_reduce(e, model):
    """Coefficients ``c0``, ``c2`` of the reduced equation for energy ``e``."""
    p, a = model.params, model.a
    c0 = 2.0 * p.m0 * a * a * e / p.hbar**2
    c2 = (p.m0 * p.omega0 * a * a / p.hbar) ** 2
    return DimensionlessForm(a, c0, c2)
