"""Experiment configuration: a flat ``key = value`` text format.

One assignment per line, full-line ``#`` comments, list values in square
brackets: ``grid = [1.1, 1.2, 1.3]``. No nesting, no sections, no quoting;
the goal is a format that diffs cleanly and parses without a dependency.
Unknown keys and duplicate keys are rejected. Booleans are lowercase
``true`` / ``false``.

Recognized keys (R = required):

    checks (R)           list of check names from inequalities.CHECKS
    family (R)           shape family from inequalities.FAMILIES
    grid (R)             family parameter values, nonempty
    q                    exponent values, each in [1, 2]        [1.0]
    beta                 boundary weights, each > 0             [1.0]
    c_factor             obstacle levels as fractions of inf u  [0.0]
    k                    perturbation frequency (perturbed)     2
    n_r, n_theta         mesh resolution                        48, 96
    K                    boundary polygon size, even, >= 64     512
    M                    radial grid steps                      4096
    n_angles             asymmetry sampling                     4096
    estimate_tolerance   half-resolution tolerance gauge        true
    default_tol          fallback tolerance fraction            1e-3
    name                 config label                           file stem
    output_dir           artifact directory                     out/<name>

The q = 2 endpoint parses (it is the linear eigenvalue case) but no sweep
check accepts it; requesting it is reported as a configuration error at
dispatch. There is no eps key: the eps-regularized boundary term is a
radial-solver concern and no batch check consumes it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .errors import ConfigError
from .inequalities import CHECKS, FAMILIES, Resolution

_LIST_FLOAT = ("grid", "q", "beta", "c_factor")
_LIST_STR = ("checks",)
_INT = ("k", "n_r", "n_theta", "K", "M", "n_angles")
_FLOAT = ("default_tol",)
_BOOL = ("estimate_tolerance",)
_STR = ("family", "name", "output_dir")
_KNOWN = set(_LIST_FLOAT + _LIST_STR + _INT + _FLOAT + _BOOL + _STR)
_REQUIRED = ("checks", "family", "grid")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    checks: tuple
    family: str
    grid: tuple
    q_values: tuple = (1.0,)
    beta_values: tuple = (1.0,)
    c_factors: tuple = (0.0,)
    k: int = 2
    domain_K: int = 512
    resolution: Resolution = field(default_factory=Resolution)
    output_dir: str = ""

    def __post_init__(self):
        if not self.checks:
            raise ConfigError('config field "checks": must be nonempty')
        for ch in self.checks:
            if ch not in CHECKS:
                raise ConfigError(f'config field "checks": unknown check {ch!r}')
        if len(set(self.checks)) != len(self.checks):
            raise ConfigError('config field "checks": duplicates')
        if self.family not in FAMILIES:
            raise ConfigError(f'config field "family": unknown family {self.family!r}')
        if not self.grid:
            raise ConfigError('config field "grid": must be nonempty')
        for v in self.q_values:
            if not 1.0 <= v <= 2.0:
                raise ConfigError(f'config field "q": value {v} outside [1, 2]')
        for v in self.beta_values:
            if not v > 0.0:
                raise ConfigError(f'config field "beta": value {v} must be positive')
        for v in self.c_factors:
            if v < 0.0:
                raise ConfigError(f'config field "c_factor": value {v} must be >= 0')
        if self.k < 1:
            raise ConfigError('config field "k": must be a positive integer')
        if self.domain_K < 64 or self.domain_K % 2 != 0:
            raise ConfigError('config field "K": must be even and >= 64')
        if not self.output_dir:
            object.__setattr__(self, "output_dir", f"out/{self.name}")

    def cardinality(self, check: str) -> int:
        """Row count the check's CSV must have: the full grid product, with
        the obstacle-level axis counted only where it applies."""
        n = len(self.grid) * len(self.q_values) * len(self.beta_values)
        if check == "ec_ball":
            n *= len(self.c_factors)
        return n


def _parse_value(key: str, raw: str, lineno: int):
    def bad(why):
        return ConfigError(f'config field "{key}" (line {lineno}): {why}')

    if key in _LIST_FLOAT or key in _LIST_STR:
        if not (raw.startswith("[") and raw.endswith("]")):
            raise bad("expected a bracketed list")
        body = raw[1:-1].strip()
        items = [t.strip() for t in body.split(",")] if body else []
        if key in _LIST_STR:
            return tuple(items)
        try:
            return tuple(float(t) for t in items)
        except ValueError:
            raise bad(f"non-numeric entry in {raw}") from None
    if key in _INT:
        try:
            return int(raw)
        except ValueError:
            raise bad(f"expected an integer, got {raw!r}") from None
    if key in _FLOAT:
        try:
            return float(raw)
        except ValueError:
            raise bad(f"expected a number, got {raw!r}") from None
    if key in _BOOL:
        if raw == "true":
            return True
        if raw == "false":
            return False
        raise bad(f"expected true or false, got {raw!r}")
    return raw


def parse_config(text: str, name: str = "config") -> ExperimentConfig:
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if key not in _KNOWN:
            raise ConfigError(f'config field "{key}" (line {lineno}): unknown key')
        if key in values:
            raise ConfigError(f'config field "{key}" (line {lineno}): duplicate key')
        values[key] = _parse_value(key, raw, lineno)
    for key in _REQUIRED:
        if key not in values:
            raise ConfigError(f'config field "{key}": missing required key')
    try:
        res = Resolution(
            n_r=values.pop("n_r", 48),
            n_theta=values.pop("n_theta", 96),
            M=values.pop("M", 4096),
            n_angles=values.pop("n_angles", 4096),
            estimate_tolerance=values.pop("estimate_tolerance", True),
            default_tol=values.pop("default_tol", 1e-3),
        )
    except ValueError as ex:
        raise ConfigError(f"config resolution fields: {ex}") from ex
    return ExperimentConfig(
        name=values.pop("name", name),
        checks=values.pop("checks"),
        family=values.pop("family"),
        grid=values.pop("grid"),
        q_values=values.pop("q", (1.0,)),
        beta_values=values.pop("beta", (1.0,)),
        c_factors=values.pop("c_factor", (0.0,)),
        k=values.pop("k", 2),
        domain_K=values.pop("K", 512),
        resolution=res,
        output_dir=values.pop("output_dir", ""),
    )


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as ex:
        raise ConfigError(f"cannot read config {path}: {ex}") from ex
    import os

    stem = os.path.splitext(os.path.basename(str(path)))[0]
    return parse_config(text, name=stem)


def builtin_config_names() -> list:
    names = []
    for entry in resources.files("robinlab.configs").iterdir():
        if entry.name.endswith(".cfg"):
            names.append(entry.name[: -len(".cfg")])
    return sorted(names)


def builtin_config_text(name: str) -> str:
    ref = resources.files("robinlab.configs") / f"{name}.cfg"
    if not ref.is_file():
        raise ConfigError(
            f"no built-in config {name!r}; available: {builtin_config_names()}"
        )
    return ref.read_text(encoding="utf-8")


def load_builtin(name: str) -> ExperimentConfig:
    return parse_config(builtin_config_text(name), name=name)


def config_description(name: str) -> str:
    """First comment line of a built-in config, for listings."""
    for line in builtin_config_text(name).splitlines():
        line = line.strip()
        if line.startswith("#"):
            return line.lstrip("# ").strip()
        if line:
            break
    return ""
