"""Backend that pipes SMT-LIB text to an optimizing solver process."""
from __future__ import annotations

import logging
import shlex
import shutil
import subprocess
from dataclasses import dataclass, field

from .encoding import Encoding, yv
from .model import SolverModel, unbig
from .smtlib import parse_model_values, parse_sexprs

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    pass


class SolverTimeout(SolverError):
    def __init__(self, message: str, partial: SolverModel | None = None):
        super().__init__(message)
        self.partial = partial


@dataclass
class ExternalSmtBackend:
    """Runs ``command`` (default ``z3 -in``) once per solve, script on stdin."""

    command: list[str] = field(default_factory=lambda: ["z3", "-in"])
    grace: float = 5.0

    name = "external"

    @classmethod
    def from_string(cls, cmd: str | None) -> "ExternalSmtBackend":
        return cls(shlex.split(cmd)) if cmd else cls()

    def available(self) -> bool:
        return shutil.which(self.command[0]) is not None

    def run(self, script: str, timeout: float | None) -> str:
        wall = None if timeout is None else timeout + self.grace
        try:
            proc = subprocess.run(self.command, input=script, capture_output=True, text=True, timeout=wall)
        except FileNotFoundError:
            raise SolverError(f"solver executable not found: {self.command[0]}") from None
        except subprocess.TimeoutExpired:
            raise SolverTimeout(f"solver process exceeded {wall:.0f} s") from None
        if proc.returncode != 0 and not proc.stdout.strip():
            raise SolverError(f"solver exited with {proc.returncode}: {proc.stderr.strip()[:500]}")
        return proc.stdout

    def _solve(self, enc: Encoding, timeout: float | None) -> SolverModel | None:
        ms = None if timeout is None else max(1, int(timeout * 1000))
        out = self.run(enc.script(timeout_ms=ms), timeout)
        exprs = parse_sexprs(out)
        if not exprs:
            raise SolverError("empty solver output")
        status = exprs[0]
        errors = [e for e in exprs if isinstance(e, list) and e and e[0] == "error"]
        if status == "unsat":
            return None
        values = {}
        if len(exprs) > 1 and not errors:
            values = parse_model_values(out[out.index(status) + len(status):])
        if status == "sat":
            if errors:
                raise SolverError(f"solver reported errors: {errors[:3]}")
            return self._model(enc, values, optimal=True)
        if status == "unknown":
            partial = self._model(enc, values, optimal=False) if values else None
            raise SolverTimeout("solver returned unknown (timeout or resource limit)", partial)
        raise SolverError(f"unexpected solver output: {out[:500]!r}")

    def _model(self, enc: Encoding, values: dict, optimal: bool) -> SolverModel:
        m = SolverModel(enc.n, values, optimal=optimal)
        if enc.mode == "interval":
            m.root_values = [
                (unbig(values[yv("lo", z, enc.n, 0)], enc.big), unbig(values[yv("hi", z, enc.n, 0)], enc.big))
                for z in range(enc.entries)
            ]
            m.objective = unbig(values[enc.objective], enc.big)
        else:
            m.root_values = [bool(values[yv("s", z, enc.n, 0)]) for z in range(enc.entries)]
            labels = [int(lab) for _, lab in enc.data]
            m.objective = float(sum((v if lab == 1 else not v) for v, lab in zip(m.root_values, labels)))
        return m

    def optimize(self, enc: Encoding, timeout: float | None = None) -> SolverModel:
        if enc.objective is None:
            raise ValueError("optimize needs an encoding with an objective")
        m = self._solve(enc, timeout)
        if m is None:
            raise SolverError("optimization problem is unsatisfiable")
        return m

    def max_weighted(self, enc: Encoding, timeout: float | None = None) -> SolverModel:
        m = self._solve(enc, timeout)
        if m is None:
            raise SolverError("hard constraints are unsatisfiable")
        return m

    def satisfy(self, enc: Encoding, timeout: float | None = None) -> SolverModel | None:
        return self._solve(enc, timeout)
