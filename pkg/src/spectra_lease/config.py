"""Flat ``key = value`` run configuration and run manifests.

One setting per line, ``#`` starts a comment.  Positions are written
``x, y`` and the distance sweep as a comma-separated list.  A manifest is a
config file with every key materialised plus ``scenario`` and ``version``;
feeding it back through :func:`load_config` reproduces the run.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

from . import __version__
from .game import GameParams
from .selection import SelectionPolicy
from .sim import ScenarioConfig

META_KEYS = ("scenario", "version")
SCENARIOS = ("scenario1", "scenario2")
UNSOURCED_KEYS = (
    "eta3", "p_max", "grid", "realizations", "distances", "n_runs", "window",
    "pt", "pr", "st", "sr", "ed", "selfish_radius", "reliable_radius", "sr_distance",
)

_GAME_FIELDS = {f.name: f for f in dataclasses.fields(GameParams)}
_SCEN_FIELDS = {f.name: f for f in dataclasses.fields(ScenarioConfig) if f.name != "game"}
_POINT_KEYS = ("pt", "pr", "st", "sr", "ed")
_INT_KEYS = ("n_sus", "n_slots", "n_runs", "window", "realizations", "seed", "grid")


class ConfigError(ValueError):
    pass


def _convert(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key == "policy":
            if raw != "all":
                SelectionPolicy(raw)
            return raw
        if key in _POINT_KEYS:
            parts = [float(p) for p in raw.split(",")]
            if len(parts) != 2:
                raise ValueError("expected 'x, y'")
            return tuple(parts)
        if key == "distances":
            return tuple(float(p) for p in raw.split(",") if p.strip())
        return float(raw)
    except ValueError as e:
        raise ConfigError(f"{key}: cannot parse {raw!r} ({e})") from None


def parse_pairs(lines: Iterable[str], source: str = "<config>") -> dict[str, str]:
    pairs: dict[str, str] = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{n}: expected 'key = value', got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        pairs[key] = value
    return pairs


def build_config(pairs: Mapping[str, str]) -> tuple[ScenarioConfig, dict[str, str]]:
    """Validate raw string pairs into a config plus any manifest metadata."""
    game_kw, scen_kw, meta = {}, {}, {}
    for key, raw in pairs.items():
        if key in META_KEYS:
            meta[key] = raw.strip()
        elif key in _GAME_FIELDS:
            game_kw[key] = _convert(key, raw)
        elif key in _SCEN_FIELDS:
            scen_kw[key] = _convert(key, raw)
        else:
            raise ConfigError(f"unknown key {key!r}")
    if "scenario" in meta and meta["scenario"] not in SCENARIOS:
        raise ConfigError(f"scenario: unknown scenario {meta['scenario']!r}")
    try:
        game = GameParams(**game_kw)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    try:
        cfg = ScenarioConfig(game=game, **scen_kw)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    return cfg, meta


def load_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Union[Mapping[str, str], Iterable[str], None] = None,
) -> tuple[ScenarioConfig, dict[str, str]]:
    pairs: dict[str, str] = {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from None
        pairs.update(parse_pairs(text.splitlines(), str(path)))
    if overrides:
        if isinstance(overrides, Mapping):
            pairs.update({k: str(v) for k, v in overrides.items()})
        else:
            pairs.update(parse_pairs(overrides, "--set"))
    return build_config(pairs)


def parse_config(path=None, overrides=None) -> ScenarioConfig:
    """Config file plus overrides (overrides win) -> validated ScenarioConfig."""
    return load_config(path, overrides)[0]


def _fmt(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(_fmt(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def config_pairs(cfg: ScenarioConfig) -> dict[str, str]:
    out = {name: _fmt(getattr(cfg, name)) for name in _SCEN_FIELDS}
    out.update({name: _fmt(getattr(cfg.game, name)) for name in _GAME_FIELDS})
    return out


def manifest_text(cfg: ScenarioConfig, scenario: str) -> str:
    lines = [
        "# spectra-lease run manifest; pass back with --config to reproduce",
        f"# keys without a value stated in the source model: {', '.join(UNSOURCED_KEYS)}",
        f"scenario = {scenario}",
        f"version = {__version__}",
    ]
    lines += [f"{k} = {v}" for k, v in config_pairs(cfg).items()]
    return "\n".join(lines) + "\n"


def write_manifest(cfg: ScenarioConfig, scenario: str, out_dir: Union[str, Path]) -> Path:
    path = Path(out_dir) / "manifest.txt"
    path.write_text(manifest_text(cfg, scenario), encoding="utf-8")
    return path
