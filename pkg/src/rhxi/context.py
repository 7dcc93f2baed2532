"""Working-precision context and evaluation results."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

from mpmath.ctx_mp import MPContext

from .errors import PrecisionError, PreconditionError

__all__ = [
    "PrecisionContext",
    "EvalResult",
    "Flag",
    "as_complex",
    "as_real",
]

DEFAULT_PRECISION_BITS = 256
DEFAULT_GUARD_BITS = 64


@lru_cache(maxsize=None)
def _mp_for(bits: int) -> MPContext:
    # One private mpmath context per precision; never mutated after creation,
    # so values and contexts can be shared between threads.
    m = MPContext()
    m.prec = bits
    return m


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision and absolute target tolerance for one evaluation.

    ``precision_bits`` is the binary precision of every intermediate,
    ``target_tol`` the absolute error the caller wants on returned values and
    ``guard_bits`` the headroom that must remain between the two.
    """

    precision_bits: int = DEFAULT_PRECISION_BITS
    target_tol: float = 1e-12
    guard_bits: int = DEFAULT_GUARD_BITS

    def __post_init__(self):
        if int(self.precision_bits) != self.precision_bits or self.precision_bits < 64:
            raise PreconditionError(
                f"precision_bits must be an integer >= 64, got {self.precision_bits}")
        if int(self.guard_bits) != self.guard_bits or self.guard_bits < 32:
            raise PreconditionError(f"guard_bits must be an integer >= 32, got {self.guard_bits}")
        tol = float(self.target_tol)
        if not (tol > 0 and math.isfinite(tol)):
            raise PreconditionError(f"target_tol must be positive and finite, got {self.target_tol}")
        floor = 2.0 ** (-self.precision_bits + self.guard_bits)
        if tol < floor:
            raise PrecisionError(
                f"target_tol={tol:g} unachievable with {self.precision_bits} bits "
                f"and {self.guard_bits} guard bits (floor {floor:.3g})")
        object.__setattr__(self, "target_tol", tol)

    @classmethod
    def for_tolerance(cls, tol: float, guard_bits: int = DEFAULT_GUARD_BITS) -> "PrecisionContext":
        """Smallest context whose precision covers ``tol`` plus ``guard_bits``."""
        bits = max(64, math.ceil(-math.log2(tol)) + guard_bits)
        return cls(precision_bits=bits, target_tol=tol, guard_bits=guard_bits)

    @property
    def mp(self) -> MPContext:
        return _mp_for(self.precision_bits)

    @property
    def eps(self) -> float:
        """Unit roundoff of the working precision."""
        return 2.0 ** (-self.precision_bits)

    def with_tol(self, tol: float) -> "PrecisionContext":
        return replace(self, target_tol=tol)

    def tightened(self, factor: float) -> "PrecisionContext":
        """Context with ``target_tol`` scaled by ``factor``, clipped at the floor."""
        floor = 2.0 ** (-self.precision_bits + self.guard_bits)
        return replace(self, target_tol=max(self.target_tol * factor, floor))


class Flag(enum.Enum):
    NEAR_POLE = "NEAR_POLE"
    CANCELLATION = "CANCELLATION"


@dataclass(frozen=True)
class EvalResult:
    """A value with an absolute error estimate.

    Error bounds are first-order propagated estimates, not interval enclosures.
    """

    value: object
    err_bound: float
    flags: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not (self.err_bound >= 0 and math.isfinite(self.err_bound)):
            raise ValueError(f"err_bound must be finite and non-negative, got {self.err_bound}")


def as_complex(z, ctx: PrecisionContext):
    """Convert ``z`` to an ``mpc`` of the context, rejecting NaN and infinities."""
    m = ctx.mp
    if isinstance(z, str):
        z = z.replace(" ", "").replace("i", "j")
    try:
        w = m.mpc(m.mpmathify(z)) if isinstance(z, str) else m.mpc(z)
    except (TypeError, ValueError) as exc:
        raise PreconditionError(f"cannot interpret {z!r} as a complex number") from exc
    if not (m.isfinite(w.real) and m.isfinite(w.imag)):
        raise PreconditionError(f"complex value must be finite, got {z!r}")
    return w


def as_real(x, ctx: PrecisionContext):
    m = ctx.mp
    try:
        v = m.mpf(x)
    except (TypeError, ValueError) as exc:
        raise PreconditionError(f"cannot interpret {x!r} as a real number") from exc
    if not m.isfinite(v):
        raise PreconditionError(f"real value must be finite, got {x!r}")
    return v
