"""Enumeration budgets and run settings.

Settings resolve as flag > config file > default.  The config file is a plain
``key=value`` text file; its path comes from ``--config`` or the
``LOCALMATCH_CONFIG`` environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

CONFIG_ENV = "LOCALMATCH_CONFIG"


@dataclass(frozen=True)
class Budgets:
    max_group_order: int = 512
    max_field_size: int = 4096
    max_space_dim: int = 4
    max_matching_size: int = 8  # brute-force bijection oracle
    max_oracle_field_size: int = 256  # brute m(K,L) and brute stabilizers
    max_oracle_basis_dim: int = 3
    max_subspace_search: int = 20000  # exhaustive subspace searches
    seed: int = 0
    workers: int = 1


DEFAULT = Budgets()


def parse_config(text: str) -> dict[str, int]:
    known = {f.name for f in fields(Budgets)}
    out: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise ValueError(f"config line {lineno}: {key} must be an integer") from None
    return out


def load_budgets(path: str | os.PathLike | None = None, **overrides) -> Budgets:
    """Build budgets from defaults, then the config file, then non-None overrides."""
    if path is None:
        path = os.environ.get(CONFIG_ENV)
    values: dict[str, int] = {}
    if path:
        values.update(parse_config(Path(path).read_text()))
    values.update({k: v for k, v in overrides.items() if v is not None})
    return replace(DEFAULT, **values)
