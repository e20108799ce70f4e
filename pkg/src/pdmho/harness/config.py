"""Study configuration and its ``key = value`` file format."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DomainError

DEFAULT_TOLERANCES = {
    "algebraic": 1e-12,
    "quadrature": 1e-10,
    "ode": 1e-9,
    "definition": 1e-10,
    "legendre_orthogonality": 1e-9,
    "hermite_orthogonality": 1e-8,
    "derivative": 1e-5,
    "quadrature_rule": 1e-12,
    "transform": 1e-12,
    "oracle": 1e-5,
    "overlap": 1e-5,
    "constant_mass": 1e-4,
    "limit_expansion": 0.1,
}

OUTPUT_FORMATS = ("csv", "json")


@dataclass
class StudyConfig:
    """Parameters shared by the limit studies and :func:`verify_all`.

    ``l_values``/``n_values`` drive the limit suites; ``grid_size`` the
    finite-difference suites; ``quadrature_order`` the Gram matrices.
    """

    l_values: list = field(default_factory=lambda: [10, 20, 40, 80, 160])
    n_values: list = field(default_factory=lambda: [0, 1, 2, 3])
    grid_size: int = 4000
    quadrature_order: int = 256
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_format: str = "json"
    output_path: str = ""

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.l_values:
            raise DomainError("l_values must not be empty")
        for l in self.l_values:
            if int(l) != l or l < 2:
                raise DomainError(f"every l must be an integer >= 2, got {l!r}")
        for n in self.n_values:
            if int(n) != n or n < 0:
                raise DomainError(f"every n must be a non-negative integer, got {n!r}")
        if int(self.grid_size) != self.grid_size or self.grid_size < 16:
            raise DomainError(f"grid_size must be an integer >= 16, got {self.grid_size!r}")
        if int(self.quadrature_order) != self.quadrature_order or not 1 <= self.quadrature_order <= 512:
            raise DomainError(f"quadrature_order must be in 1..512, got {self.quadrature_order!r}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise DomainError(f"unknown tolerance names: {sorted(unknown)}")
        for name, tol in self.tolerances.items():
            if not tol > 0:
                raise DomainError(f"tolerance {name} must be positive, got {tol!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise DomainError(f"output_format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}")

    def tol(self, name):
        return self.tolerances[name]

    def with_overrides(self, **overrides):
        """Copy with the non-``None`` overrides applied.

        ``tolerance`` sets every tolerance at once; ``tol_<name>`` sets one.
        """
        values = dataclasses.asdict(self)
        tolerances = dict(values.pop("tolerances"))
        for key, value in overrides.items():
            if value is None:
                continue
            if key == "tolerance":
                tolerances = {name: float(value) for name in tolerances}
            elif key.startswith("tol_"):
                tolerances[key[4:]] = float(value)
            elif key in values:
                values[key] = value
            else:
                raise DomainError(f"unknown configuration key {key!r}")
        return StudyConfig(tolerances=tolerances, **values)


def _int_list(text):
    return [int(tok) for tok in text.replace(",", " ").split()]


_PARSERS = {
    "l_values": _int_list,
    "n_values": _int_list,
    "grid_size": int,
    "quadrature_order": int,
    "output_format": str.strip,
    "output_path": str.strip,
    "tolerance": float,
}


def parse_config_text(text):
    """Parse ``key = value`` lines (``#`` starts a comment) into overrides."""
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key.startswith("tol_"):
            overrides[key] = float(value)
        elif key in _PARSERS:
            overrides[key] = _PARSERS[key](value)
        else:
            raise DomainError(f"line {lineno}: unknown key {key!r}")
    return overrides


def load_config(path=None, **overrides):
    """Defaults, then the file at ``path``, then ``overrides``."""
    config = StudyConfig()
    if path is not None:
        config = config.with_overrides(**parse_config_text(Path(path).read_text()))
    return config.with_overrides(**overrides)
