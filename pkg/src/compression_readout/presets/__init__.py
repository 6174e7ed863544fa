"""Shipped experiment presets, one TOML file per reproduced figure."""
from __future__ import annotations

import pathlib

_DIR = pathlib.Path(__file__).parent


def names() -> list[str]:
    return sorted(p.stem for p in _DIR.glob("*.toml"))


def path_for(name: str) -> pathlib.Path:
    stem = name.removesuffix(".toml")
    path = _DIR / f"{stem}.toml"
    if not path.exists():
        raise FileNotFoundError(
            f"no config file or preset named {name!r} (presets: {', '.join(names())})"
        )
    return path
