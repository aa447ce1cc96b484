"""Tolerance profile used by classification, spectral checks and simulation."""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError

ENV_VAR = "KPOSI_TOL_PROFILE"


@dataclass(frozen=True)
class ToleranceProfile:
    tau_zero: float = 1e-9
    """Minor zero threshold, relative to the Hadamard bound of the submatrix."""
    tau_spec: float = 1e-6
    """Spectral residual / consistency threshold."""
    tau_gap: float = 1e-6
    """Relative eigenvalue gap below which a spectral split is refused."""
    tau_rate: float = 0.05
    """Slack on the fitted log separation slope."""
    state_zero_rel: float = 1e-10
    """Entries of a state with |x_i| <= state_zero_rel * max|x| count as zero."""

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and v > 0):
                raise ValueError(f"tolerance {f.name} must be strictly positive, got {v!r}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def replace(self, **changes) -> "ToleranceProfile":
        changes = {k: v for k, v in changes.items() if v is not None}
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_file(cls, path) -> "ToleranceProfile":
        """Parse a ``key=value`` file; blank lines and ``#`` comments are skipped."""
        names = {f.name for f in dataclasses.fields(cls)}
        values = {}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected key=value in tolerance profile {path}", line=lineno)
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in names:
                raise ParseError(f"unknown tolerance {key!r}", line=lineno)
            try:
                values[key] = float(val)
            except ValueError:
                raise ParseError(f"tolerance {key!r} is not a number: {val!r}", line=lineno) from None
        try:
            return cls(**values)
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    @classmethod
    def resolve(cls, path=None, **overrides) -> "ToleranceProfile":
        """File given explicitly, else $KPOSI_TOL_PROFILE, else defaults; then overrides."""
        if path is None:
            path = os.environ.get(ENV_VAR) or None
        base = cls.from_file(path) if path else cls()
        return base.replace(**overrides)


DEFAULT = ToleranceProfile()
