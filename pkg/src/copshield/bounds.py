"""Closed-form quantities of the vertex-cover cop bounds, evaluated in log2 space.

``f(2, 2)`` is already ``2**1025``, so nothing here materialises ``f``; callers
compare ``log2 |X|`` against :func:`log2_f` instead.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath

from .errors import DomainError

CLAMP_K = 2


def _log2(value: int | float) -> float:
    # math.log2 is exact for powers of two and accepts arbitrarily large ints
    return math.log2(value)


def log2_f(k: int, d: int) -> float:
    """``(log k)^2 + 2^8 log(kd) (log log k + d)`` with base-2 logarithms."""
    if k < 2 or d < 2:
        raise DomainError(f"f(k, d) needs k, d >= 2 (got k={k}, d={d})")
    lk = _log2(k)
    return lk * lk + 256 * _log2(k * d) * (_log2(lk) + d)


def ceil_log2(value: int) -> int:
    if value < 1:
        raise DomainError("ceil_log2 needs a positive integer")
    return (value - 1).bit_length()


def t_alpha(k: int, d: int, x: int) -> tuple[int, float]:
    """Return ``t = ceil(log(2dk))`` and ``log2(alpha)`` for ``alpha = 32 t log(2tx)``."""
    if k < 2 or d < 2 or x < 2:
        raise DomainError(f"t/alpha need k, d, x >= 2 (got {k}, {d}, {x})")
    t = ceil_log2(2 * d * k)
    return t, 5 + _log2(t) + _log2(_log2(2 * t * x))


def alpha_value(k: int, d: int, x: int) -> float:
    t, la = t_alpha(k, d, x)
    return 32 * t * _log2(2 * t * x)


def theorem2_radicand(log2_x: float, d: int) -> float:
    """``log x - 2^9 (sqrt(log x) + log d)(log log x + d)``."""
    if log2_x < 1 or d < 2:
        raise DomainError("radicand needs x, d >= 2")
    return log2_x - 512 * (math.sqrt(log2_x) + _log2(d)) * (_log2(log2_x) + d)


@dataclass(frozen=True)
class KChoice:
    k: int
    exponent: float
    radicand: float
    clamped: bool


def theorem2_k(x: int, d: int) -> KChoice:
    """``k = 2^sqrt(radicand)`` rounded down; clamped to 2 when that is smaller or undefined."""
    if x < 2 or d < 2:
        raise DomainError(f"theorem2_k needs x, d >= 2 (got x={x}, d={d})")
    return theorem2_k_from_log2(_log2(x), d, x_cap=x)


def theorem2_k_from_log2(log2_x: float, d: int, x_cap: int | None = None) -> KChoice:
    rad = theorem2_radicand(log2_x, d)
    if rad <= 1:
        return KChoice(CLAMP_K, math.sqrt(rad) if rad > 0 else float("nan"), rad, True)
    e = math.sqrt(rad)
    if e < 52:
        k = int(2.0**e)
    else:
        with mpmath.workdps(int(e * 0.302) + 30):
            k = int(mpmath.floor(mpmath.power(2, mpmath.mpf(e))))
    if x_cap is not None:
        k = min(k, x_cap)
    if k < CLAMP_K:
        return KChoice(CLAMP_K, e, rad, True)
    return KChoice(k, e, rad, False)


def epsilon_c(epsilon: Fraction | int | str) -> tuple[int, bool]:
    """``c = (3/eps)^(2/eps) + 1``; returns ``(c, ceiling_applied)``."""
    eps = Fraction(epsilon)
    if not 0 < eps <= 1:
        raise DomainError(f"epsilon must lie in (0, 1], got {eps}")
    expo = 2 / eps
    if expo.denominator == 1:
        value = (3 / eps) ** int(expo)
        if value.denominator == 1:
            return int(value) + 1, False
        return math.ceil(value) + 1, True
    with mpmath.workdps(60):
        value = mpmath.power(mpmath.mpf(3 * eps.denominator) / eps.numerator,
                             mpmath.mpf(expo.numerator) / expo.denominator)
        return int(mpmath.ceil(value)) + 1, True


def theorem1_exponent(vc: int) -> float:
    """``sqrt(log vc)``: the exponent in ``vc / 2^((1-o(1)) sqrt(log vc))`` without the o(1)."""
    if vc < 1:
        raise DomainError("vc must be positive")
    return math.sqrt(_log2(vc)) if vc > 1 else 0.0


@dataclass
class BoundReport:
    k: int
    d: int
    x: int
    vc: int | None = None
    epsilon: str | None = None
    log2_f: float = 0.0
    t: int = 1
    log2_alpha: float = 0.0
    theorem1_exponent: float = 0.0
    theorem2_k: int = CLAMP_K
    theorem2_k_clamped: bool = True
    theorem2_log2_bound: float = 0.0
    epsilon_c: int = 2
    epsilon_c_ceiled: bool = False
    realized_budget: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_text(self) -> str:
        """Flat ``key=value`` record, one field per line, in declaration order."""
        out = []
        for key, value in asdict(self).items():
            if isinstance(value, list):
                value = ";".join(value)
            elif isinstance(value, float):
                value = repr(value)
            out.append(f"{key}={value}")
        return "\n".join(out) + "\n"


def bound_report(k: int, d: int, x: int, epsilon: Fraction | str | int = 1, vc: int | None = None) -> BoundReport:
    """Evaluate every closed form for one parameter tuple."""
    t, la = t_alpha(k, d, x)
    choice = theorem2_k(x, d)
    c, ceiled = epsilon_c(epsilon)
    lf = log2_f(choice.k, d)
    # log2(x/k + f(k, d) + 1): the budget of the vertex-cover capture strategy
    terms = [_log2(x) - _log2(choice.k), lf, 0.0]
    top = max(terms)
    log2_bound = top + math.log2(sum(2.0 ** (v - top) for v in terms))
    rep = BoundReport(
        k=k, d=d, x=x, vc=vc, epsilon=str(Fraction(epsilon)),
        log2_f=log2_f(k, d), t=t, log2_alpha=la,
        theorem1_exponent=theorem1_exponent(vc if vc else x),
        theorem2_k=choice.k, theorem2_k_clamped=choice.clamped,
        theorem2_log2_bound=log2_bound, epsilon_c=c, epsilon_c_ceiled=ceiled,
    )
    if choice.clamped:
        rep.notes.append(f"k clamped to {CLAMP_K}: radicand {choice.radicand:.1f} gives no k >= 2")
    if ceiled:
        rep.notes.append("epsilon_c rounded up to an integer")
    return rep
