"""Command line entry point (``pdmho``).

Every command prints its table to stdout. With ``--output`` the table is
written to a file instead, relative paths landing in ``$PDMHO_OUTPUT_DIR``
when that is set.
"""
from __future__ import annotations

import logging
import sys

import click
import numpy as np

from ..errors import DomainError
from ..model import ConfinedModel, PhysicalParams, Wavefunction, potential, spectrum
from ..oracle import compare_spectra
from . import io
from .config import load_config
from .studies import figure1_dataset, figure2_dataset, hermite_reference_dataset, limit_study
from .suites import verify_all


def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return [int(tok) for tok in value.replace(",", " ").split()]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of integers, got {value!r}")


def _emit(text, output):
    if output:
        path = io.resolve_output(output)
        io.atomic_write_text(path, text)
        click.echo(f"wrote {path}", err=True)
    else:
        click.echo(text, nl=False)


def _render(fmt, columns, units=None, comments=(), extra=None):
    if fmt == "csv":
        return io.csv_text(columns, units, comments)
    payload = {"columns": columns, "units": units or {}}
    payload.update(extra or {})
    return io.json_text(payload)


_format_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
_output_option = click.option("--output", "-o", default=None, help="Write to this file instead of stdout.")


class _Group(click.Group):
    """Reports invalid model arguments as usage errors instead of tracebacks."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except DomainError as exc:
            raise click.UsageError(str(exc), ctx) from exc


@click.group(cls=_Group)
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose):
    """Confined position-dependent-mass oscillator: spectra, checks and datasets."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")


@main.command("spectrum")
@click.option("--l", "l", type=int, required=True, help="Confinement label, l >= 2.")
@click.option("--m0", type=float, default=1.0, show_default=True)
@click.option("--omega0", type=float, default=1.0, show_default=True)
@click.option("--hbar", type=float, default=1.0, show_default=True)
@_format_option
@_output_option
def spectrum_cmd(l, m0, omega0, hbar, fmt, output):
    """Levels E(l, m) for m = l..0 with their bound flags."""
    params = PhysicalParams(m0, omega0, hbar)
    model = ConfinedModel(l, params)
    levels = spectrum(l, params)
    cols = {
        "m": np.array([lv.m for lv in levels]),
        "n": np.array([lv.n for lv in levels]),
        "energy": np.array([lv.energy for lv in levels]),
        "bound": np.array([int(lv.bound) for lv in levels]),
    }
    edge = float(potential(model.a, params))
    meta = {"l": l, "a": model.a, "edge_potential": edge}
    comments = [f"l = {l}", f"a = {io.format_number(model.a)}", f"edge_potential = {io.format_number(edge)}"]
    _emit(_render(fmt, cols, {"energy": "energy"}, comments, meta), output)


@main.command("wavefunction")
@click.option("--l", "l", type=int, required=True)
@click.option("--m", "m", type=int, required=True, help="Order, 2 <= m <= l.")
@click.option("--points", type=int, default=201, show_default=True, help="Samples on the closed interval [-a, a].")
@_format_option
@_output_option
def wavefunction_cmd(l, m, points, fmt, output):
    """Sample psi(l, m) and its density across the well."""
    if points < 2:
        raise click.BadParameter("need at least 2 points", param_hint="--points")
    model = ConfinedModel(l)
    wf = Wavefunction(l, m, model)
    x = np.linspace(-model.a, model.a, points)
    psi = wf(x)
    cols = {"x": x, "psi": psi, "density": psi * psi}
    units = {"x": "length", "psi": "1/sqrt(length)", "density": "1/length"}
    meta = {"l": l, "m": m, "a": model.a, "energy": wf.energy}
    _emit(_render(fmt, cols, units, [f"l = {l}", f"m = {m}", f"a = {io.format_number(model.a)}"], meta), output)


@main.command("oracle")
@click.option("--l", "l", type=int, required=True)
@click.option("--grid", type=int, default=4000, show_default=True, help="Interior grid points.")
@click.option("--states", type=int, default=None, help="Number of lowest levels to compare (default all bound).")
@click.option("--extra", type=int, default=0, show_default=True, help="Further eigenvalues to list without comparison.")
@_format_option
@_output_option
def oracle_cmd(l, grid, states, extra, fmt, output):
    """Compare the analytic levels with the finite-difference oracle."""
    report = compare_spectra(ConfinedModel(l), grid, states, extra)
    rows = list(report.as_rows())
    cols = {key: np.array([r[key] for r in rows]) for key in rows[0]}
    comments = [f"l = {l}", f"grid = {grid}", f"edge_energy = {io.format_number(report.edge_energy)}"]
    comments += [f"unvalidated = {io.format_number(v)}" for v in report.unvalidated]
    meta = {"l": l, "grid_size": grid, "edge_energy": report.edge_energy, "unvalidated": report.unvalidated}
    _emit(_render(fmt, cols, {"analytic": "energy", "numeric": "energy", "abs_error": "energy"}, comments, meta), output)


def _dataset_text(data, fmt):
    comments = [f"{k} = {v}" for k, v in data.meta.items()]
    comments += [w["reason"] for w in data.warnings]
    return _render(fmt, data.columns, data.units, comments, {"kind": data.kind, "meta": data.meta, "warnings": data.warnings})


@main.command("limit")
@click.option("--n", "n_values", callback=_int_list, default="0,1,2,3", show_default=True)
@click.option("--l", "l_values", callback=_int_list, default="10,20,40,80,160", show_default=True)
@_format_option
@_output_option
def limit_cmd(n_values, l_values, fmt, output):
    """Distance of E_n(l) from the unconfined level as l grows."""
    config = load_config(n_values=n_values, l_values=l_values)
    data = limit_study(config)
    _emit(_dataset_text(data, fmt), output)


@main.command("figure1")
@click.option("--l", "l", type=int, default=2, show_default=True)
@click.option("--points", type=int, default=512, show_default=True)
@click.option("--hermite-limit", is_flag=True, help="Emit the unconfined (l -> infinity) reference instead.")
@_format_option
@_output_option
def figure1_cmd(l, points, hermite_limit, fmt, output):
    """Potential, levels and densities for one confinement label."""
    data = hermite_reference_dataset(grid_points=points) if hermite_limit else figure1_dataset(l, points)
    _emit(_dataset_text(data, fmt), output)


@main.command("figure2")
@click.option("--n", "n_values", callback=_int_list, default="0,1,2,3", show_default=True)
@click.option("--lmax", type=int, default=None, help="Largest l (default n + 10 for each n).")
@_format_option
@_output_option
def figure2_cmd(n_values, lmax, fmt, output):
    """Energy of level n against the confinement length."""
    _emit(_dataset_text(figure2_dataset(n_values, lmax), fmt), output)


@main.command("verify")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--l-values", callback=_int_list, default=None)
@click.option("--n-values", callback=_int_list, default=None)
@click.option("--grid-size", type=int, default=None)
@click.option("--quadrature-order", type=int, default=None)
@click.option("--tolerance", type=float, default=None, help="Override every tolerance.")
@click.option("--only", multiple=True, help="Run only suites whose name starts with this prefix.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None)
@_output_option
def verify_cmd(config_path, l_values, n_values, grid_size, quadrature_order, tolerance, only, fmt, output):
    """Run every invariant suite; exit status 0 iff all pass."""
    try:
        config = load_config(
            config_path,
            l_values=l_values,
            n_values=n_values,
            grid_size=grid_size,
            quadrature_order=quadrature_order,
            tolerance=tolerance,
            output_format=fmt,
            output_path=output,
        )
    except DomainError as exc:
        raise click.UsageError(f"invalid configuration: {exc}") from exc
    rows, status = verify_all(config, only=only or None)
    if config.output_format == "csv":
        keys = ("name", "status", "max_error", "tolerance", "runtime_ms")
        text = io.csv_text({k: [r[k] for r in rows] for k in keys}, {"runtime_ms": "ms"})
    else:
        text = io.json_text(rows)
    _emit(text, config.output_path)
    for r in rows:
        if r["status"] != "pass":
            click.echo(f"{r['status'].upper()}: {r['name']} max_error={r['max_error']:.3g} tolerance={r['tolerance']:.3g} {r['detail']}", err=True)
    sys.exit(status)


if __name__ == "__main__":
    main()
