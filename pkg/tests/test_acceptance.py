"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run standalone (``python3 tests/test_acceptance.py``) or under pytest, where
the lines appear in the terminal summary.
"""
import math
import sys
import time

import numpy as np
import pytest

from pdmho.harness.studies import (
    hermite_gram,
    orthonormality_suite,
    transformation_identity_check,
    wavefunction_limit_distance,
)
from pdmho.harness.suites import refinement_ratios
from pdmho.model import (
    ConfinedModel,
    confinement_length,
    energy,
    energy_by_n,
    frequency_profile,
    mass_profile,
    ode_residual,
    potential,
    spectrum,
)
from pdmho.oracle import compare_spectra

RESULTS = []


def _decreasing(seq):
    return all(b < a for a, b in zip(seq, seq[1:]))


def criterion_1():
    expected = {2: math.sqrt(2), 5: 7**0.25 * math.sqrt(2), 7: 6**0.25 * math.sqrt(3)}
    err = max(abs(confinement_length(l) - v) / v for l, v in expected.items())
    return err <= 1e-12, f"max rel err {err:.2e} (tol 1e-12)"


def criterion_2():
    worst = 0.0
    for l in range(2, 21):
        model = ConfinedModel(l)
        x = np.linspace(-model.a, model.a, 10_002)[1:-1]
        worst = max(worst, np.max(np.abs(mass_profile(x, model) * frequency_profile(x, model) ** 2 - 1.0)))
    return worst <= 1e-12, f"max |M w^2 - 1| {worst:.2e} over 10^4 points, l=2..20 (tol 1e-12)"


def criterion_3():
    levels = (0.377964, 1.228378, 1.889822, 2.362278)
    rep5 = compare_spectra(ConfinedModel(5), 4000)
    rel5 = max(abs(n - e) / e for n, e in zip(rep5.numeric, levels))
    rep2 = compare_spectra(ConfinedModel(2), 4000)
    rel2 = abs(rep2.numeric[0] - 0.25) / 0.25
    ratios = refinement_ratios(5) + refinement_ratios(2)
    ok = len(rep5.numeric) == 4 and rel5 <= 1e-5 and rel2 <= 1e-5 and all(3.5 <= r <= 4.5 for r in ratios)
    shown = ", ".join(f"{r:.3f}" for r in ratios)
    return ok, f"l=5 rel {rel5:.2e}, l=2 rel {rel2:.2e} (tol 1e-5); refinement ratios {shown} in [3.5, 4.5]"


def criterion_4():
    ok, worst = True, 0.0
    for l in (2, 5, 7):
        bound = [lv for lv in spectrum(l) if lv.bound]
        edge = potential(confinement_length(l))
        ok &= len(bound) == l - 1 and all(lv.energy < edge for lv in bound)
        worst = max(worst, abs(energy(l, 1) - edge) / edge)
    ok &= worst <= 1e-12
    return ok, f"l-1 bound states below V(a), edge identity rel err {worst:.2e} (tol 1e-12)"


def criterion_5():
    _, dev = orthonormality_suite(10, 256)
    return dev <= 1e-10, f"Gram deviation {dev:.2e} at l=10, order 256 (tol 1e-10)"


def criterion_6():
    worst = 0.0
    for l in range(2, 21):
        model = ConfinedModel(l)
        x = np.linspace(-model.a, model.a, 1002)[1:-1]
        for m in model.bound_orders:
            worst = max(worst, float(np.max(np.abs(ode_residual(l, m, model, x)))))
    return worst <= 1e-9, f"max normalized residual {worst:.2e}, l<=20 (tol 1e-9)"


def criterion_7():
    ok, worst = True, 0.0
    for n in range(4):
        devs = [abs(energy_by_n(l, n) - (n + 0.5)) for l in (10, 20, 40, 80, 160)]
        ok &= _decreasing(devs)
        expansion = ((n + 0.5) ** 2 / 2 + 5 / 8) / confinement_length(160) ** 2
        worst = max(worst, abs(devs[-1] - expansion) / expansion)
    spot = abs(energy_by_n(100, 0) - 0.492592)
    ok &= worst <= 0.1 and spot <= 1e-6
    return ok, f"monotone; expansion mismatch {worst:.2%} at l=160 (tol 10%); |E_0(100) - 0.492592| {spot:.1e}"


def criterion_8():
    ok, final = True, []
    for n in range(3):
        dist = [wavefunction_limit_distance(l, n) for l in (10, 20, 40, 80)]
        ok &= _decreasing(dist)
        final.append(dist[-1])
    return ok, "sup distance strictly decreasing; at l=80: " + ", ".join(f"{d:.2e}" for d in final)


def criterion_9():
    worst = 0.0
    for n in range(6):
        for lam in (0.5, 1.5, 2.5, 3.5, 4.5):
            for xi in (-0.9, -0.4, 0.1, 0.6, 0.95):
                r = transformation_identity_check(n, lam, xi)
                worst = max(worst, r["even"].diff, r["odd"].diff)
    spot = transformation_identity_check(1, 2.0, 0.4)["even"]
    spot_ok = abs(spot.lhs + 0.008) <= 1e-15 and abs(spot.rhs + 0.008) <= 1e-15
    return worst <= 1e-12 and spot_ok, f"max abs diff {worst:.2e} (tol 1e-12); spot lhs {spot.lhs:.15g}, rhs {spot.rhs:.15g}"


def criterion_10():
    _, dev = hermite_gram(6)
    return dev <= 1e-8, f"Hermite Gram deviation {dev:.2e}, n<=6 (tol 1e-8)"


CRITERIA = [
    (1, "confinement lengths", criterion_1),
    (2, "homogeneity of k", criterion_2),
    (3, "oracle spectrum agreement", criterion_3),
    (4, "bound-state count and edge identity", criterion_4),
    (5, "orthonormality", criterion_5),
    (6, "ODE residual", criterion_6),
    (7, "energy limit", criterion_7),
    (8, "wavefunction limit", criterion_8),
    (9, "transformation identities", criterion_9),
    (10, "reference oscillator", criterion_10),
]


def run_criterion(num, title, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:2d} {title}: {detail} [{time.perf_counter() - t0:.2f}s]"
    RESULTS.append(line)
    print(line)
    return ok, line


@pytest.mark.parametrize("num, title, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn):
    ok, line = run_criterion(num, title, fn)
    assert ok, line


def test_total_runtime():
    t0 = time.perf_counter()
    for num, title, fn in CRITERIA:
        fn()
    elapsed = time.perf_counter() - t0
    assert elapsed <= 60.0, f"acceptance suite took {elapsed:.1f}s"


if __name__ == "__main__":
    outcomes = [run_criterion(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(outcomes) else 1)
