"""Resource caps and numeric settings shared by every command."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any

from cogrowth.models import UsageError

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "limits.json"


@dataclass(frozen=True)
class Limits:
    max_basis: int = 2000           # Gröbner basis elements
    max_queue: int = 200_000        # pending compositions
    max_states: int = 20_000        # oracle columns, line-graph edges
    max_prefix_len: int = 2_000_000 # generated prefix of a word source
    exhaustive_cap: int = 12        # period-bound sweep
    oracle_slack: int = 2
    coefficient_field: str = "rational"   # "rational" or "prime:<p>"
    seed: int = 42

    @classmethod
    def from_json(cls, path: str | Path, **overrides: Any) -> "Limits":
        """Load limits from JSON with optional CLI overrides (None is ignored)."""
        path = Path(path)
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        raw.update({k: v for k, v in overrides.items() if v is not None})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise UsageError(f"{path}: unknown limit keys {unknown}")
        return cls(**raw)

    def replace(self, **overrides: Any) -> "Limits":
        data = asdict(self)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return Limits(**data)


DEFAULT_LIMITS = Limits()
