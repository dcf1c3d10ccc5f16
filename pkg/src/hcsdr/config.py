"""Optimizer configuration files.

A config file is TOML with optional ``[anneal]`` and ``[simplex]`` tables
whose keys are the fields of :class:`AnnealConfig` and
:class:`SimplexConfig`; anything omitted keeps its default::

    [anneal]
    iterations = 1000
    initial_temp = 0.1

    [simplex]
    tol_f = 1e-10
"""
from __future__ import annotations

import sys
from dataclasses import asdict, fields, replace

from .core import HcsdrError
from .optimizer import AnnealConfig, SimplexConfig

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(HcsdrError, ValueError):
    pass


def _apply(base, table: dict, where: str):
    known = {f.name: f.type for f in fields(base)}
    unknown = sorted(set(table) - set(known))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")
    current = asdict(base)
    coerced = {}
    for key, value in table.items():
        default = current[key]
        try:
            coerced[key] = type(default)(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{where}.{key}: cannot use {value!r}") from None
    try:
        return replace(base, **coerced)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def load_config(path=None, anneal_overrides=None, simplex_overrides=None):
    """Return ``(AnnealConfig, SimplexConfig)`` from defaults, file, then overrides."""
    anneal, simplex = AnnealConfig(), SimplexConfig()
    if path is not None:
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        extra = sorted(set(doc) - {"anneal", "simplex"})
        if extra:
            raise ConfigError(f"{path}: unknown table(s) {', '.join(extra)}")
        anneal = _apply(anneal, doc.get("anneal", {}), "anneal")
        simplex = _apply(simplex, doc.get("simplex", {}), "simplex")
    if anneal_overrides:
        anneal = _apply(anneal, {k: v for k, v in anneal_overrides.items() if v is not None}, "anneal")
    if simplex_overrides:
        simplex = _apply(simplex, {k: v for k, v in simplex_overrides.items() if v is not None}, "simplex")
    return anneal, simplex


def _toml_value(v) -> str:
    if isinstance(v, str):
        return f'"{v}"'
    if isinstance(v, float):
        return repr(v)
    return str(v)


def dump_config(anneal: AnnealConfig, simplex: SimplexConfig) -> str:
    out = []
    for name, cfg in (("anneal", anneal), ("simplex", simplex)):
        out.append(f"[{name}]")
        out.extend(f"{k} = {_toml_value(v)}" for k, v in asdict(cfg).items())
        out.append("")
    return "\n".join(out)
