"""Verification reports emitted by every check."""
from __future__ import annotations

import json
import math
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any

import mpmath


def _dec(x, digits: int) -> str:
    if isinstance(x, str):
        return x
    return mpmath.nstr(mpmath.mpf(x), digits, min_fixed=-5, max_fixed=8)


def digits_agreed(lhs, rhs, cap: int) -> int:
    err = abs(mpmath.mpf(lhs) - mpmath.mpf(rhs))
    scale = max(abs(mpmath.mpf(lhs)), mpmath.mpf(1))
    if err == 0:
        return cap
    return max(0, min(cap, int(math.floor(-mpmath.log10(err / scale)))))


@dataclass
class VerificationReport:
    check_id: str
    lhs: str
    rhs: str
    abs_err: str
    digits_agreed: int
    params: dict[str, Any] = field(default_factory=dict)
    runtime_ms: int = 0
    status: str = "pass"

    @classmethod
    def compare(cls, check_id: str, lhs, rhs, tol, *, digits: int = 20,
                params: dict[str, Any] | None = None, runtime_ms: int = 0,
                status: str | None = None) -> "VerificationReport":
        """Build a report; ``status`` is pass iff |lhs - rhs| <= tol unless overridden."""
        with mpmath.workdps(max(digits + 10, mpmath.mp.dps)):
            err = abs(mpmath.mpf(lhs) - mpmath.mpf(rhs))
            ok = err <= mpmath.mpf(tol)
            p = {"tolerance": _dec(tol, 6)}
            p.update(params or {})
            return cls(
                check_id=check_id,
                lhs=_dec(lhs, digits + 2),
                rhs=_dec(rhs, digits + 2),
                abs_err=_dec(err, 6),
                digits_agreed=digits_agreed(lhs, rhs, digits + 2),
                params=p,
                runtime_ms=runtime_ms,
                status=status or ("pass" if ok else "fail"),
            )

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=False)

    def to_text(self) -> str:
        return (f"{self.status.upper():5s} {self.check_id:24s} lhs={self.lhs} rhs={self.rhs} "
                f"err={self.abs_err} digits={self.digits_agreed} ({self.runtime_ms} ms)")


@contextmanager
def stopwatch():
    """Yields a callable returning elapsed milliseconds."""
    t0 = time.perf_counter()
    yield lambda: int(round((time.perf_counter() - t0) * 1000))
