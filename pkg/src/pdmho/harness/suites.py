"""
Invariant suites and the ``verify_all`` driver.

Every suite returns a :class:`SuiteOutcome`; the driver times it and turns
it into a flat report row ``{name, status, max_error, tolerance,
runtime_ms}``. Monotonicity suites count violations, so their tolerance is
reported as 0 and ``max_error`` as the number of violations.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .. import model as mdl
from ..oracle import compare_spectra, eigen_spectrum, flux_form_operator
from ..specfun import (
    assoc_legendre,
    assoc_legendre_2f1,
    gauss_legendre_rule,
    gegenbauer,
    gegenbauer_2f1,
    gegenbauer_derivative,
    hermite,
    hermite_2f0,
)
from .config import StudyConfig
from .studies import (
    hermite_gram,
    limit_study,
    orthonormality_suite,
    transformation_identity_check,
    wavefunction_limit_distance,
)

log = logging.getLogger(__name__)

CONVERGENCE_WINDOW = (3.5, 4.5)
ORACLE_L_VALUES = (2, 5, 7)
# l = 5 levels from the closed form, m = 5..2
L5_LEVELS = (0.377964, 1.228378, 1.889822, 2.362278)


@dataclass
class SuiteOutcome:
    max_error: float
    tolerance: float
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    name: str
    status: str
    max_error: float
    tolerance: float
    runtime_ms: float
    detail: str = ""


def _outcome(err, tol, detail=""):
    err = float(err)
    return SuiteOutcome(err, float(tol), bool(err <= tol), detail)


def _violations(count, detail=""):
    return SuiteOutcome(float(count), 0.0, count == 0, detail)


def _strictly_decreasing(seq):
    return all(b < a for a, b in zip(seq, seq[1:]))


SAMPLE_X = (-0.9, -0.3, 0.0, 0.4, 0.8)


# specfun -------------------------------------------------------------------

def suite_gegenbauer_definition(cfg):
    """Recurrences against the hypergeometric definitions, relative to sup norms."""
    worst = 0.0
    x = np.array(SAMPLE_X)
    for lam in (0.5, 1.5, 2.5):
        for n in range(11):
            scale = gegenbauer(n, lam, 1.0)
            worst = max(worst, np.max(np.abs(gegenbauer(n, lam, x) - gegenbauer_2f1(n, lam, x))) / scale)
    for n in range(11):
        xs = np.linspace(-3, 3, 13)
        ref = hermite_2f0(n, xs)
        worst = max(worst, np.max(np.abs(hermite(n, xs) - ref)) / np.max(np.abs(ref)))
    xi = np.linspace(-0.95, 0.95, 39)
    for l in range(13):
        for m in range(l + 1):
            ref = assoc_legendre_2f1(l, m, xi)
            worst = max(worst, np.max(np.abs(assoc_legendre(l, m, xi) - ref)) / np.max(np.abs(ref)))
    return _outcome(worst, cfg.tol("definition"))


def suite_parity(cfg):
    x = np.linspace(0.05, 0.95, 20)
    bad = 0
    for n in range(16):
        sign = (-1.0) ** n
        bad += int(np.count_nonzero(hermite(n, -x) != sign * hermite(n, x)))
        for lam in (0.5, 1.5, 2.5):
            bad += int(np.count_nonzero(gegenbauer(n, lam, -x) != sign * gegenbauer(n, lam, x)))
    return _violations(bad)


def suite_hermite_orthogonality(cfg):
    """Weight ``exp(-x^2)`` on ``[-12, 12]``, normalized by ``sqrt(pi) 2^n n!``."""
    rule = gauss_legendre_rule(200)
    x = 12.0 * rule.nodes
    h = np.array([hermite(n, x) for n in range(7)])
    gram = 12.0 * (h * (rule.weights * np.exp(-x * x))) @ h.T / math.sqrt(math.pi)
    norms = np.array([2.0**n * math.factorial(n) for n in range(7)])
    rel = np.abs(gram - np.diag(norms)) / np.sqrt(np.outer(norms, norms))
    return _outcome(rel.max(), cfg.tol("hermite_orthogonality"))


def suite_legendre_orthogonality(cfg):
    rule = gauss_legendre_rule(cfg.quadrature_order)
    xi, w = rule.nodes, rule.weights
    worst = 0.0
    for l in range(2, 11):
        p = {m: assoc_legendre(l, m, xi) for m in range(2, l + 1)}
        norm = {m: math.factorial(l + m) / (m * math.factorial(l - m)) for m in p}
        for m in p:
            for mp in p:
                val = np.dot(w, p[m] * p[mp] / (1.0 - xi * xi))
                target = norm[m] if m == mp else 0.0
                worst = max(worst, abs(val - target) / math.sqrt(norm[m] * norm[mp]))
    return _outcome(worst, cfg.tol("legendre_orthogonality"))


def suite_derivative(cfg):
    h = 1e-6
    x = np.array(SAMPLE_X)
    worst = 0.0
    for lam in (0.5, 1.5, 2.5):
        for n in range(11):
            fd = (gegenbauer(n, lam, x + h) - gegenbauer(n, lam, x - h)) / (2 * h)
            worst = max(worst, np.max(np.abs(gegenbauer_derivative(n, lam, x) - fd)))
    return _outcome(worst, cfg.tol("derivative"))


def suite_quadrature_rule(cfg):
    worst = 0.0
    for order in (1, 2, 3, 8, 16, 33, 64):
        rule = gauss_legendre_rule(order)
        worst = max(worst, np.max(np.abs(rule.nodes + rule.nodes[::-1])), abs(rule.weights.sum() - 2.0) / 2.0)
        for j in range(2 * order):
            exact = 2.0 / (j + 1) if j % 2 == 0 else 0.0
            got = np.dot(rule.weights, rule.nodes**j)
            worst = max(worst, abs(got - exact) / (exact if exact else 1.0))
    return _outcome(worst, cfg.tol("quadrature_rule"))


# model ---------------------------------------------------------------------

def suite_confinement_length(cfg):
    expected = {2: math.sqrt(2.0), 5: 7**0.25 * math.sqrt(2.0), 7: 6**0.25 * math.sqrt(3.0)}
    worst = max(abs(mdl.confinement_length(l) - v) / v for l, v in expected.items())
    return _outcome(worst, cfg.tol("algebraic"))


def suite_homogeneity(cfg):
    worst = 0.0
    for l in range(2, 21):
        model = mdl.ConfinedModel(l)
        x = np.linspace(-model.a, model.a, 10_002)[1:-1]
        k = mdl.mass_profile(x, model) * mdl.frequency_profile(x, model) ** 2
        worst = max(worst, np.max(np.abs(k - model.params.k)) / model.params.k)
    return _outcome(worst, cfg.tol("algebraic"))


def suite_limit_profiles(cfg):
    """``M(1) -> m0`` and ``w(1) -> w0`` monotonically, inside ``3 / a_l^2``."""
    bad = 0
    mass_dev, freq_dev = [], []
    for l in (10, 20, 40, 80):
        model = mdl.ConfinedModel(l)
        mass_dev.append(abs(mdl.mass_profile(1.0, model) - 1.0))
        freq_dev.append(abs(mdl.frequency_profile(1.0, model) - 1.0))
        bad += int(mass_dev[-1] > 3.0 / model.a**2) + int(freq_dev[-1] > 3.0 / model.a**2)
    bad += int(not _strictly_decreasing(mass_dev)) + int(not _strictly_decreasing(freq_dev))
    return _violations(bad, f"|M(1)-m0| at l=80: {mass_dev[-1]:.4g}, |w(1)-w0|: {freq_dev[-1]:.4g}")


def suite_edge_identity(cfg):
    worst, bad = 0.0, 0
    for l in range(2, 51):
        e1 = mdl.energy(l, 1)
        v = mdl.potential(mdl.confinement_length(l))
        worst = max(worst, abs(e1 - v) / v)
        bad += int(not mdl.energy(l, 0) > e1)
    out = _outcome(worst, cfg.tol("algebraic"))
    if bad:
        out.passed = False
        out.detail = f"{bad} labels with E(l,0) <= E(l,1)"
    return out


def suite_spectrum_ordering(cfg):
    bad = 0
    for l in range(2, 51):
        levels = mdl.spectrum(l)
        energies = [lv.energy for lv in levels]
        bad += int(not all(b > a for a, b in zip(energies, energies[1:])))
        bad += int(levels[0].m != l)
        bad += int(sum(lv.bound for lv in levels) != l - 1)
    return _violations(bad)


def suite_orthonormality(cfg):
    worst = max(orthonormality_suite(l, cfg.quadrature_order)[1] for l in range(2, 13))
    return _outcome(worst, cfg.tol("quadrature"))


def suite_wavefunction_parity(cfg):
    worst = 0.0
    for l in range(2, 13):
        model = mdl.ConfinedModel(l)
        x = np.linspace(0.0, model.a, 52)[1:-1]
        for m in model.bound_orders:
            wf = mdl.Wavefunction(l, m, model)
            plus, minus = wf(x), wf(-x)
            sign = (-1.0) ** (l - m)
            worst = max(worst, np.max(np.abs(minus - sign * plus)) / np.max(np.abs(plus)))
    return _outcome(worst, cfg.tol("algebraic"))


def suite_form_agreement(cfg):
    """Gegenbauer vs associated-Legendre form (up to the ``(-1)^m`` phase)."""
    worst = 0.0
    for l in range(2, 13):
        model = mdl.ConfinedModel(l)
        x = np.linspace(-model.a, model.a, 52)[1:-1]
        for m in model.bound_orders:
            g = mdl.Wavefunction(l, m, model)(x)
            p = (-1.0) ** m * mdl.wavefunction_legendre(l, m, model, x)
            worst = max(worst, np.max(np.abs(g - p)) / np.max(np.abs(g)))
    return _outcome(worst, cfg.tol("quadrature"))


def suite_ode_residual(cfg):
    worst = 0.0
    for l in range(2, 21):
        model = mdl.ConfinedModel(l)
        x = np.linspace(-model.a, model.a, 1002)[1:-1]
        for m in model.bound_orders:
            worst = max(worst, np.max(np.abs(mdl.ode_residual(l, m, model, x))))
    return _outcome(worst, cfg.tol("ode"))


def suite_quantization(cfg):
    worst = 0.0
    for l in range(2, 21):
        model = mdl.ConfinedModel(l)
        for m in model.bound_orders:
            form = mdl.dimensionless_reduce(mdl.energy(l, m), model)
            worst = max(worst, *form.quantization_residuals(l, m)) / (l * (l + 1))
    return _outcome(worst, cfg.tol("algebraic"), "residuals relative to l(l+1)")


def suite_reindexing(cfg):
    worst = 0.0
    for l in range(2, 101):
        for n in range(l - 1):
            e = mdl.energy(l, l - n)
            worst = max(worst, abs(mdl.energy_by_n(l, n) - e) / abs(e))
    return _outcome(worst, cfg.tol("algebraic"))


def suite_energy_limit(cfg):
    bad, worst = 0, 0.0
    for n in range(4):
        devs = [abs(mdl.energy_by_n(l, n) - mdl.hermite_energy(n)) for l in (10, 20, 40, 80, 160)]
        bad += int(not _strictly_decreasing(devs))
        a2 = mdl.confinement_length(160) ** 2
        expansion = ((n + 0.5) ** 2 / 2 + 5.0 / 8.0) / a2
        worst = max(worst, abs(devs[-1] - expansion) / expansion)
    bad += int(abs(mdl.energy_by_n(100, 0) - 0.492592) > 1e-6)
    out = _outcome(worst, cfg.tol("limit_expansion"), "relative mismatch to the 1/a^2 expansion at l=160")
    if bad:
        out.passed = False
        out.detail += f"; {bad} monotonicity or spot-value failures"
    return out


def suite_reference_oscillator(cfg):
    """Gram matrix of the unconfined eigenfunctions ``n <= 6``."""
    return _outcome(hermite_gram(6)[1], cfg.tol("hermite_orthogonality"))


def suite_wavefunction_limit(cfg):
    bad = 0
    for n in range(3):
        dist = [wavefunction_limit_distance(l, n) for l in (10, 20, 40, 80)]
        bad += int(not _strictly_decreasing(dist))
    return _violations(bad)


# oracle --------------------------------------------------------------------

def suite_oracle_spectrum(cfg, reports):
    worst = 0.0
    for l, rep in reports.items():
        worst = max(worst, *rep.rel_errors)
    rep5 = reports.get(5)
    if rep5 is not None:
        worst = max(worst, *(abs(n - e) / e for n, e in zip(rep5.numeric, L5_LEVELS)))
    return _outcome(worst, cfg.tol("oracle"))


def suite_oracle_bound_count(cfg, reports):
    bad = 0
    for l, rep in reports.items():
        bad += int(len(rep.numeric) != l - 1)
        bad += sum(1 for e in rep.numeric if not e < rep.edge_energy)
    return _violations(bad)


def suite_oracle_overlaps(cfg):
    worst = 0.0
    for l in range(2, 8):
        rep = compare_spectra(mdl.ConfinedModel(l), cfg.grid_size)
        worst = max(worst, *(1.0 - o for o in rep.eigenvector_overlaps))
    return _outcome(worst, cfg.tol("overlap"))


def refinement_ratios(l, coarse=1000):
    """``error(coarse) / error(2 coarse)`` per compared state."""
    model = mdl.ConfinedModel(l)
    a = compare_spectra(model, coarse)
    b = compare_spectra(model, 2 * coarse)
    return [ea / eb for ea, eb in zip(a.abs_errors, b.abs_errors)]


def suite_oracle_convergence(cfg):
    lo, hi = CONVERGENCE_WINDOW
    ratios = [r for l in (2, 5) for r in refinement_ratios(l)]
    bad = sum(1 for r in ratios if not lo <= r <= hi)
    return _violations(bad, "ratios " + ", ".join(f"{r:.3f}" for r in ratios))


def suite_oracle_constant_mass(cfg):
    op = flux_form_operator(-12.0, 12.0, cfg.grid_size, lambda x: np.ones_like(x), lambda x: 0.5 * x * x)
    values, _ = eigen_spectrum(op, 6)
    worst = max(abs(v - (n + 0.5)) for n, v in enumerate(values))
    return _outcome(worst, cfg.tol("constant_mass"))


# harness -------------------------------------------------------------------

def suite_transform_identities(cfg):
    worst = 0.0
    for big_n in range(6):
        for lam in (0.5, 1.5, 2.5, 3.5, 4.5):
            for xi in (-0.9, -0.4, 0.1, 0.6, 0.95):
                r = transformation_identity_check(big_n, lam, xi)
                worst = max(worst, r["even"].diff, r["odd"].diff)
    return _outcome(worst, cfg.tol("transform"))


def suite_limit_monotonic(cfg):
    data = limit_study(cfg)
    bad = 0
    for n in sorted(set(data.columns["n"].tolist())):
        sel = data.columns["n"] == n
        bad += int(not _strictly_decreasing(data.columns["deviation"][sel].tolist()))
    return _violations(bad, f"{len(data.warnings)} skipped pairs")


def _suites(cfg):
    reports = {}

    def oracle_reports():
        if not reports:
            for l in ORACLE_L_VALUES:
                reports[l] = compare_spectra(mdl.ConfinedModel(l), cfg.grid_size)
        return reports

    return [
        ("specfun.definition_agreement", suite_gegenbauer_definition),
        ("specfun.parity", suite_parity),
        ("specfun.hermite_orthogonality", suite_hermite_orthogonality),
        ("specfun.legendre_orthogonality", suite_legendre_orthogonality),
        ("specfun.derivative_identity", suite_derivative),
        ("specfun.quadrature_rule", suite_quadrature_rule),
        ("model.confinement_length", suite_confinement_length),
        ("model.homogeneity", suite_homogeneity),
        ("model.limit_profiles", suite_limit_profiles),
        ("model.edge_identity", suite_edge_identity),
        ("model.spectrum_ordering", suite_spectrum_ordering),
        ("model.orthonormality", suite_orthonormality),
        ("model.parity", suite_wavefunction_parity),
        ("model.form_agreement", suite_form_agreement),
        ("model.ode_residual", suite_ode_residual),
        ("model.quantization", suite_quantization),
        ("model.reindexing", suite_reindexing),
        ("model.energy_limit", suite_energy_limit),
        ("model.wavefunction_limit", suite_wavefunction_limit),
        ("model.reference_oscillator", suite_reference_oscillator),
        ("oracle.spectrum", lambda c: suite_oracle_spectrum(c, oracle_reports())),
        ("oracle.bound_count", lambda c: suite_oracle_bound_count(c, oracle_reports())),
        ("oracle.overlaps", suite_oracle_overlaps),
        ("oracle.convergence", suite_oracle_convergence),
        ("oracle.constant_mass", suite_oracle_constant_mass),
        ("harness.transformation_identities", suite_transform_identities),
        ("harness.limit_monotonic", suite_limit_monotonic),
    ]


SUITE_NAMES = tuple(name for name, _ in _suites(StudyConfig()))


def verify_all(config: StudyConfig | None = None, only=None):
    """Run every suite once; returns ``(report rows, exit status)``.

    ``only`` restricts the run to suite names starting with any of the given
    prefixes. A suite that raises is reported as ``error``.
    """
    cfg = config or StudyConfig()
    cfg.validate()
    rows = []
    for name, fn in _suites(cfg):
        if only and not any(name.startswith(p) for p in only):
            continue
        t0 = time.perf_counter()
        try:
            out = fn(cfg)
            status = "pass" if out.passed else "fail"
        except Exception as exc:  # reported, not raised: one broken suite must not hide the rest
            log.exception("suite %s raised", name)
            out = SuiteOutcome(math.nan, math.nan, False, f"{type(exc).__name__}: {exc}")
            status = "error"
        runtime = 1e3 * (time.perf_counter() - t0)
        rows.append(asdict(SuiteResult(name, status, out.max_error, out.tolerance, round(runtime, 3), out.detail)))
        log.info("%-36s %s", name, status)
    return rows, 0 if all(r["status"] == "pass" for r in rows) else 1
