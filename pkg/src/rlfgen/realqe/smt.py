"""External SMT solver adapter: SMT-LIB2 over a child process's standard streams."""

from __future__ import annotations

import os
import shlex
import shutil
import subprocess
import threading
from dataclasses import dataclass

from ..logic import Exists, Formula, free_vars, is_quantifier_free, negate, simplify, to_smtlib

SOLVER_ENV = "RLFGEN_SMT_SOLVER"
DEFAULT_COMMAND = "z3 -in -smt2"


@dataclass(frozen=True)
class SmtAnswer:
    status: str  # "sat" | "unsat" | "unknown" | "timeout" | "error"
    detail: str = ""


class SmtAdapter:
    """Runs one solver process per query; calls on one adapter are serialised."""

    def __init__(self, command: str | None = None):
        self.command = command or os.environ.get(SOLVER_ENV, DEFAULT_COMMAND)
        self._lock = threading.Lock()

    @property
    def available(self) -> bool:
        argv = shlex.split(self.command)
        return bool(argv) and shutil.which(argv[0]) is not None

    def check(self, script: str, timeout_ms: int | None = None) -> SmtAnswer:
        if not self.available:
            return SmtAnswer("error", f"solver command not found: {self.command}")
        argv = shlex.split(self.command)
        timeout = None if timeout_ms is None else timeout_ms / 1000
        with self._lock:
            try:
                proc = subprocess.run(argv, input=script, capture_output=True, text=True,
                                      timeout=timeout)
            except subprocess.TimeoutExpired:
                return SmtAnswer("timeout", f"no answer within {timeout_ms} ms")
        out = proc.stdout.strip().splitlines()
        first = out[0].strip() if out else ""
        if first in ("sat", "unsat", "unknown"):
            return SmtAnswer(first, proc.stderr.strip())
        return SmtAnswer("error", (proc.stdout + proc.stderr).strip()[:500])

    def decide(self, fm: Formula, timeout_ms: int | None = None) -> tuple:
        """Decide a closed formula by refuting its negation.

        Returns ``(verdict, detail)`` with verdict True, False or None.
        """
        if free_vars(fm):
            raise ValueError("decide needs a closed formula")
        goal = simplify(negate(fm))
        script = _script(goal)
        ans = self.check(script, timeout_ms)
        if ans.status == "unsat":
            return True, "unsat"
        if ans.status == "sat":
            return False, "sat"
        return None, f"{ans.status}: {ans.detail}".strip()


def _script(goal: Formula) -> str:
    # existential prefixes over a quantifier-free body go to the complete QF_NRA procedure
    body = goal
    while isinstance(body, Exists):
        body = body.body
    if is_quantifier_free(body):
        return to_smtlib(goal, "QF_NRA")
    return to_smtlib(goal, "NRA")
