"""JSON problem files and deterministic CSV/JSON output helpers."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .exceptions import DomainError
from .exprlang import parse
from .solver import ProblemSpec

FIELDS = ("alpha", "b", "q", "f", "r1", "r2", "tol", "max_iter", "damping", "f_prefactor")


def fmt_real(x: float) -> str:
    """Fixed 17-significant-digit rendering used in every CSV file."""
    return format(float(x), ".17g")


def dumps(obj) -> str:
    """Stable JSON: insertion key order, shortest round-trip floats, LF newline."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class ProblemFile:
    alpha: float
    b: int
    q: str
    f: str
    r1: float | None = None
    r2: float | None = None
    tol: float | None = None
    max_iter: int | None = None
    damping: float | None = None
    f_prefactor: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> ProblemFile:
        unknown = set(data) - set(FIELDS)
        if unknown:
            raise DomainError(f"unknown problem-file fields: {sorted(unknown)}")
        missing = [k for k in ("alpha", "b", "q", "f") if k not in data]
        if missing:
            raise DomainError(f"problem file lacks {missing}")
        b = data["b"]
        if isinstance(b, bool) or not isinstance(b, int):
            raise DomainError("b must be an integer")
        prefactor = data.get("f_prefactor")
        return cls(
            alpha=float(data["alpha"]),
            b=b,
            q=str(data["q"]),
            f=str(data["f"]),
            r1=_opt_float(data.get("r1")),
            r2=_opt_float(data.get("r2")),
            tol=_opt_float(data.get("tol")),
            max_iter=None if data.get("max_iter") is None else int(data["max_iter"]),
            damping=_opt_float(data.get("damping")),
            f_prefactor=None if prefactor is None else str(prefactor),
        )

    def to_dict(self) -> dict:
        out = {}
        for key in FIELDS:
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    def to_spec(self) -> ProblemSpec:
        return ProblemSpec(self.alpha, self.b, parse(self.q, "t"), parse(self.f, "y"), self.r1, self.r2)

    def prefactor_value(self) -> float:
        """Constant factor of ``f`` (an expression without free variable)."""
        if self.f_prefactor is None:
            return 1.0
        return parse(self.f_prefactor, "y")(0.0)


def _opt_float(value) -> float | None:
    return None if value is None else float(value)


def load_problem(path: str | Path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise DomainError("problem file must hold a JSON object")
    return ProblemFile.from_dict(data)


def save_problem(problem: ProblemFile, path: str | Path) -> None:
    Path(path).write_text(dumps(problem.to_dict()), encoding="utf-8", newline="\n")


def write_csv(path: str | Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return fmt_real(v)
    return str(v)
