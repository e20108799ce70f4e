"""
Numerical studies built on the model: Gram matrices, the even/odd ``2F1``
transformation identities behind the large-``l`` limit, and the datasets
behind the potential/density and energy-versus-width plots.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from ..model import (
    UNIT_PARAMS,
    ConfinedModel,
    Wavefunction,
    confinement_length,
    energy,
    energy_by_n,
    hermite_energy,
    hermite_wavefunction,
    potential,
)
from ..ddouble import dd_add, dd_div, dd_mul, dd_pochhammer, dd_to_float, two_prod, two_sum
from ..specfun import gauss_legendre_rule, hyp2f1_terminating, pochhammer
from .config import StudyConfig

log = logging.getLogger(__name__)

FIGURE_KINDS = ("potential_with_levels", "probability_densities", "energy_vs_a")


@dataclass
class FigureDataset:
    """Named, equal-length real columns plus their units.

    ``warnings`` collects rows a study skipped; ``meta`` carries scalars
    such as the confinement length.
    """

    kind: str
    columns: dict
    units: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown dataset kind {self.kind!r}")
        self.columns = {k: np.asarray(v, dtype=float) for k, v in self.columns.items()}
        lengths = {v.size for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError("dataset columns must have equal length")

    def __len__(self):
        return next(iter(self.columns.values())).size if self.columns else 0


def orthonormality_suite(l, quadrature_order=256, params=UNIT_PARAMS):
    """Gram matrix of the bound states of ``l`` under ``int dx`` on ``(-a, a)``.

    Returns ``(gram, max |gram - I|)``. Rows and columns run over
    ``m = l, l-1, ..., 2``.
    """
    model = ConfinedModel(l, params)
    rule = gauss_legendre_rule(quadrature_order)
    # x = a xi, dx = a dxi
    samples = np.array([Wavefunction(l, m, model).of_xi(rule.nodes) for m in model.bound_orders])
    gram = model.a * (samples * rule.weights) @ samples.T
    return gram, float(np.max(np.abs(gram - np.eye(len(samples)))))


def hermite_gram(n_max=6, params=UNIT_PARAMS, half_width=12.0, quadrature_order=200):
    """Gram matrix of the unconfined eigenfunctions ``n = 0..n_max``.

    The integral over the real line is truncated to ``|x| <= half_width``
    oscillator lengths, where the Gaussian tail is below 1e-60.
    """
    rule = gauss_legendre_rule(quadrature_order)
    span = half_width * params.length_scale
    x = span * rule.nodes
    samples = np.array([hermite_wavefunction(n, params)(x) for n in range(n_max + 1)])
    gram = span * (samples * rule.weights) @ samples.T
    return gram, float(np.max(np.abs(gram - np.eye(n_max + 1))))


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    diff: float


def transformation_identity_check(big_n, lam, xi, compensated=True):
    """Evaluate both sides of the even and odd quadratic ``2F1`` identities.

    Even::

        2F1(-2N, 2N+2lam; lam+1/2; (1-xi)/2)
            = (-1)^N (1/2)_N / (lam+1/2)_N * 2F1(-N, lam+N; 1/2; xi^2)

    Odd::

        2F1(-2N-1, 2N+1+2lam; lam+1/2; (1-xi)/2)
            = (-1)^N (3/2)_N / (lam+1/2)_N * xi * 2F1(-N, lam+N+1; 3/2; xi^2)

    The left-hand series have terms up to ~1e7 times their sum near
    ``xi = -1``, so by default both sides are summed in double-double with
    ``(1 - xi)/2`` and ``xi^2`` split exactly; ``compensated=False`` uses
    plain double sums. Returns ``{"even": IdentityCheck, "odd": IdentityCheck}``.
    """
    if int(big_n) != big_n or not 0 <= big_n <= 20:
        raise DomainError(f"N must be an integer in 0..20, got {big_n!r}")
    big_n = int(big_n)
    c = lam + 0.5
    if c <= 0 and c == int(c):
        raise DomainError(f"lam + 1/2 = {c} is a pole of the series")
    if pochhammer(c, big_n) == 0:
        raise DomainError(f"(lam + 1/2)_N vanishes for lam={lam!r}, N={big_n}")
    xi = float(xi)
    sign = -1.0 if big_n % 2 else 1.0
    n2, n2p = 2 * big_n, 2 * big_n + 1
    if not compensated:
        z = (1.0 - xi) / 2.0
        denom = pochhammer(c, big_n)
        even_l = float(hyp2f1_terminating(-n2, n2 + 2 * lam, c, z))
        even_r = float(sign * pochhammer(0.5, big_n) / denom * hyp2f1_terminating(-big_n, lam + big_n, 0.5, xi * xi))
        odd_l = float(hyp2f1_terminating(-n2p, n2p + 2 * lam, c, z))
        odd_r = float(sign * pochhammer(1.5, big_n) / denom * xi * hyp2f1_terminating(-big_n, lam + big_n + 1, 1.5, xi * xi))
        return {
            "even": IdentityCheck(even_l, even_r, abs(even_l - even_r)),
            "odd": IdentityCheck(odd_l, odd_r, abs(odd_l - odd_r)),
        }

    hi, lo = two_sum(1.0, -xi)
    z = (0.5 * hi, 0.5 * lo)
    xi2 = two_prod(xi, xi)
    denom = dd_pochhammer(c, big_n)
    even_pref = dd_div(dd_pochhammer(0.5, big_n), denom)
    odd_pref = dd_mul(dd_div(dd_pochhammer(1.5, big_n), denom), (xi, 0.0))

    even_l = hyp2f1_terminating(-n2, n2 + 2 * lam, c, z, compensated=True)
    even_r = dd_mul(even_pref, hyp2f1_terminating(-big_n, lam + big_n, 0.5, xi2, compensated=True))
    odd_l = hyp2f1_terminating(-n2p, n2p + 2 * lam, c, z, compensated=True)
    odd_r = dd_mul(odd_pref, hyp2f1_terminating(-big_n, lam + big_n + 1, 1.5, xi2, compensated=True))
    even_r = (sign * even_r[0], sign * even_r[1])
    odd_r = (sign * odd_r[0], sign * odd_r[1])
    result = {}
    for kind, lhs, rhs in (("even", even_l, even_r), ("odd", odd_l, odd_r)):
        diff = dd_add(lhs, (-rhs[0], -rhs[1]))
        result[kind] = IdentityCheck(dd_to_float(lhs), dd_to_float(rhs), abs(dd_to_float(diff)))
    return result


def _energy_rows(pairs, params):
    cols = {"n": [], "l": [], "a": [], "energy": [], "deviation": []}
    for n, l in pairs:
        e = energy_by_n(l, n, params)
        cols["n"].append(n)
        cols["l"].append(l)
        cols["a"].append(confinement_length(l, params))
        cols["energy"].append(e)
        cols["deviation"].append(abs(e - hermite_energy(n, params)))
    return cols


_ENERGY_UNITS = {"a": "length", "energy": "energy", "deviation": "energy"}


def limit_study(config: StudyConfig, params=UNIT_PARAMS) -> FigureDataset:
    """Energy levels ``E_n(l)`` and their distance from ``hbar w0 (n + 1/2)``.

    Rows are ordered by ``n`` then ``l``. Pairs with ``n > l - 2`` have no
    bound state and are skipped with a warning record.
    """
    pairs, warnings = [], []
    for n in config.n_values:
        for l in sorted(config.l_values):
            if n > l - 2:
                msg = f"skipped n={n}, l={l}: needs l >= n + 2"
                log.warning(msg)
                warnings.append({"n": n, "l": l, "reason": msg})
            else:
                pairs.append((n, l))
    return FigureDataset("energy_vs_a", _energy_rows(pairs, params), dict(_ENERGY_UNITS), warnings=warnings)


def figure2_dataset(n_values=(0, 1, 2, 3), l_max=None, span=8, params=UNIT_PARAMS) -> FigureDataset:
    """Energy versus confinement length for ``l = n+2 .. l_max``.

    With ``l_max=None`` each ``n`` gets ``l = n+2 .. n+2+span``, the
    plotted range being ``span = 8``.
    """
    pairs = []
    for n in n_values:
        top = n + 2 + span if l_max is None else l_max
        pairs.extend((n, l) for l in range(n + 2, top + 1))
    meta = {"reference_levels": {int(n): hermite_energy(n, params) for n in n_values}}
    return FigureDataset("energy_vs_a", _energy_rows(pairs, params), dict(_ENERGY_UNITS), meta=meta)


def figure1_dataset(l, grid_points=512, params=UNIT_PARAMS) -> FigureDataset:
    """Potential, levels and probability densities for one confinement ``l``.

    Columns: ``x`` on the closed interval ``[-a_l, a_l]``, ``V``, and for
    every bound ``m`` a constant column ``E_m<m>`` and the density
    ``density_m<m>``. Densities are not offset by their energies.
    """
    if int(grid_points) != grid_points or grid_points < 64:
        raise DomainError(f"grid_points must be an integer >= 64, got {grid_points!r}")
    model = ConfinedModel(l, params)
    x = np.linspace(-model.a, model.a, int(grid_points))
    cols = {"x": x, "V": potential(x, params)}
    units = {"x": "length", "V": "energy"}
    for m in model.bound_orders:
        cols[f"E_m{m}"] = np.full_like(x, energy(l, m, params))
        cols[f"density_m{m}"] = Wavefunction(l, m, model)(x) ** 2
        units[f"E_m{m}"] = "energy"
        units[f"density_m{m}"] = "1/length"
    meta = {"l": model.l, "a": model.a, "edge_potential": float(potential(model.a, params))}
    return FigureDataset("probability_densities", cols, units, meta=meta)


def hermite_reference_dataset(n_max=3, grid_points=512, x_max=4.0, params=UNIT_PARAMS) -> FigureDataset:
    """Unconfined-oscillator counterpart of :func:`figure1_dataset`.

    This is the ``l -> infinity`` limit object; no finite ``l`` reproduces it.
    """
    x = np.linspace(-x_max, x_max, int(grid_points))
    cols = {"x": x, "V": potential(x, params)}
    units = {"x": "length", "V": "energy"}
    for n in range(n_max + 1):
        cols[f"E_n{n}"] = np.full_like(x, hermite_energy(n, params))
        cols[f"density_n{n}"] = hermite_wavefunction(n, params)(x) ** 2
        units[f"E_n{n}"] = "energy"
        units[f"density_n{n}"] = "1/length"
    return FigureDataset("probability_densities", cols, units, meta={"l": math.inf, "limit_object": True})


def wavefunction_limit_distance(l, n, params=UNIT_PARAMS, x_max=3.0, points=2001):
    """``sup |psi_{l, l-n} - psi_n^{Hermite}|`` over ``[-x_max, x_max]``."""
    model = ConfinedModel(l, params)
    if x_max >= model.a:
        raise DomainError(f"x_max={x_max} must lie inside the walls at {model.a}")
    x = np.linspace(-x_max, x_max, points)
    diff = Wavefunction(l, l - n, model)(x) - hermite_wavefunction(n, params)(x)
    return float(np.max(np.abs(diff)))
