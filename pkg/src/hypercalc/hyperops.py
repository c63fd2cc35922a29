"""Rank >= 4 hyperoperations: forward towers, super-roots, super-logs.

The forward operation at rank r unrolls one step at a time,

    a (+^r) b  =  a (+^(r-1)) (a (+^r) (b-1)),      b >= 1,

down to the rank-3 power, with `a (+^r) 0 = 1` and `a (+^r) 1 = a`.  A
fractional height 0 < p/q < 1 (always a reduced fraction, i.e. an entry of
the mediant table) splits as

    a (+^r) (p/q)  =  (a (+^r) p) (-^r) q,

so rational heights reduce to integer towers plus one super-root.  The
inverses are bracketed root finding:

  * super-root   x = a (-^r) b   solves x (+^r) b = a on [1, a];
  * super-log    x = a (/^r) b   solves b (+^r) x = a on [0, m], the upper
    end found by doubling.

Inverse searches whose probe value feeds a rational-height split (the
super-log height always; super-root bases at rank >= 5) use the mediant
probe strategy so probe denominators stay as small as the bracket allows
and exact rational roots are hit exactly.

Integer towers over integer bases stay exact all the way up (2 (+^5) 3 is
exactly 65536).  Anything that would need an approximate intermediate as
the height of a rank >= 4 operator is rejected: the rational-height
construction defines no enclosure there.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from . import farey, midops
from .balls import Ball, as_ball, divide, hull, round_ball
from .errors import DomainError, MagnitudeError, PrecisionError, ResourceError
from .midops import SeriesConfig, tol_bits
from .rootfind import Bracket, RootConfig, brent, expand_upper

_REFINE_ATTEMPTS = 8


@dataclass(frozen=True)
class EngineLimits:
    """Iteration and term budgets shared by every nested search."""

    max_terms: int = 100_000
    root_iterations: int = 2000
    root_expansions: int = 80
    max_height_steps: int = 50_000
    verify_split: bool = False

    @classmethod
    def from_configs(cls, series: SeriesConfig | None, root: RootConfig | None,
                     verify_split: bool = False) -> "EngineLimits":
        return cls(
            max_terms=series.max_terms if series else 100_000,
            root_iterations=root.max_iterations if root else 2000,
            root_expansions=root.max_expansions if root else 80,
            verify_split=verify_split,
        )


_DEFAULT_LIMITS = EngineLimits()


class HyperKind(enum.Enum):
    FORWARD = "forward"
    INVERSE_MINUS = "inverse_minus"
    INVERSE_SLASH = "inverse_slash"


@dataclass(frozen=True)
class HyperRequest:
    rank: int
    kind: HyperKind
    a: Fraction | Ball
    b: Fraction | Ball
    precision: Fraction

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.precision <= 0:
            raise ValueError("precision target must be positive")


def run(request: HyperRequest, limits: EngineLimits = _DEFAULT_LIMITS) -> Ball:
    """Evaluate a request at any rank (low and middle ranks included)."""
    rank, a, b, tol = request.rank, request.a, request.b, request.precision
    if request.kind is HyperKind.FORWARD:
        if rank >= 4:
            return hyper_forward(rank, a, b, tol, limits=limits)
        if rank == 3:
            return midops.power(a, b, SeriesConfig(tol, limits.max_terms))
        av, bv = as_ball(a), as_ball(b)
        return (av + bv) if rank == 1 else (av * bv)
    if request.kind is HyperKind.INVERSE_MINUS:
        if rank >= 4:
            return hyper_inverse_minus(rank, a, b, tol, limits=limits)
        if rank == 3:
            return midops.root(a, b, SeriesConfig(tol, limits.max_terms))
        av, bv = as_ball(a), as_ball(b)
        return (av - bv) if rank == 1 else divide(av, bv)
    if rank >= 4:
        return hyper_inverse_slash(rank, a, b, tol, limits=limits)
    if rank == 3:
        return midops.log(a, b, SeriesConfig(tol, limits.max_terms))
    av, bv = as_ball(a), as_ball(b)
    return (av - bv) if rank == 1 else divide(av, bv)


# ---------------------------------------------------------------------------
# argument normalization


def _height_fraction(b, *, rank: int) -> Fraction:
    if isinstance(b, Ball):
        if not b.is_exact:
            raise DomainError(
                f"the height of a rank-{rank} operator must be an exact rational"
            )
        return b.center
    return Fraction(b)


def _value_ball(a) -> Ball:
    return a if isinstance(a, Ball) else Ball(Fraction(a))


# ---------------------------------------------------------------------------
# forward


def hyper_forward(
    rank: int,
    a: Fraction | Ball,
    b: Fraction | Ball,
    tol: Fraction,
    *,
    limits: EngineLimits = _DEFAULT_LIMITS,
) -> Ball:
    """Ball containing a (+^rank) b for rank >= 4, a >= 1, rational b >= 0."""
    if rank < 4:
        raise DomainError(f"hyper_forward needs rank >= 4, got {rank}")
    if tol <= 0:
        raise ValueError("precision target must be positive")
    height = _height_fraction(b, rank=rank)
    if height < 0:
        raise DomainError("heights below zero are not defined at rank >= 4")
    base = _value_ball(a)
    if base.is_exact:
        if base.center < 1:
            raise DomainError("rank >= 4 operators need a base >= 1")
    elif base.lo < 1:
        if base.hi < 1:
            raise DomainError("rank >= 4 operators need a base >= 1")
        raise PrecisionError("base interval reaches below 1")
    return _forward(rank, base, height, tol, limits)


def _forward(rank: int, base: Ball, height, tol: Fraction,
             limits: EngineLimits) -> Ball:
    """Core recursion; height may be a Fraction or an exact-only Ball."""
    if isinstance(height, Ball):
        if height.is_exact:
            height = height.center
        elif rank >= 4:
            raise DomainError(
                f"the height of a rank-{rank} operator must be an exact rational;"
                " this tower needs an approximate intermediate as a height"
            )
    if rank == 3:
        return midops.power(base.center if base.is_exact else base, height,
                            SeriesConfig(tol, limits.max_terms))
    if height == 0:
        return Ball(Fraction(1))
    if base.is_exact and base.center == 1:
        return Ball(Fraction(1))
    if height == 1:
        return base
    if not base.is_exact:
        lo = _forward(rank, Ball(base.lo), height, tol / 2, limits)
        hi = _forward(rank, Ball(base.hi), height, tol / 2, limits)
        return round_ball(hull(lo, hi), tol_bits(tol) + 16)

    steps = int(height) - (height.denominator == 1)
    frac = height - int(height)
    if steps > limits.max_height_steps:
        raise ResourceError(
            f"unrolling a height of {height} needs {steps} applications, "
            f"over the cap of {limits.max_height_steps}"
        )

    def fractional_tail(t: Fraction) -> Ball:
        p, q = frac.numerator, frac.denominator
        if limits.verify_split:
            farey.locate(p, q)
        try:
            tower = _forward(rank, base, Fraction(p), t / 4, limits)
            return _inverse_minus(rank, tower, Fraction(q), t / 4, limits)
        except MagnitudeError as err:
            # The split detours through a tower of the fraction's numerator,
            # which can dwarf the (possibly modest) final value; a blow-up
            # here says nothing about the result's magnitude.
            raise ResourceError(str(err)) from err

    if frac == 0:
        inner_log = _log_float(base.center)
    else:
        if steps == 0:
            return fractional_tail(tol)
        coarse = fractional_tail(Fraction(1, 1 << 16))
        inner_log = max(_log_float(coarse.hi), 0.0)
    # Each tower step amplifies the error underneath it by roughly
    # (step output) * ln(base); budget the inner tolerances accordingly,
    # with a refinement backstop since the budgets are estimates.
    budgets = _unroll_budgets(inner_log, _log_float(base.center), steps)
    extra = 0
    for _ in range(_REFINE_ATTEMPTS):
        if frac == 0:
            value: Ball = base
        else:
            value = fractional_tail(tol / (1 << (budgets[0] + extra)))
        for i in range(1, steps + 1):
            value = _forward(rank - 1, base, value,
                             tol / (1 << (budgets[i] + extra)), limits)
        if value.radius <= tol:
            return value
        extra += 8
    raise PrecisionError("tower unrolling failed to reach the requested radius")


_LN_VALUE_CAP = 726_817  # ln of 2^(2^20), the magnitude cap


def _log_float(x: Fraction) -> float:
    """Rough natural log of a positive rational, safe for any magnitude."""
    shift = x.numerator.bit_length() - x.denominator.bit_length()
    m = x / Fraction(2) ** shift
    return math.log(float(m)) + shift * math.log(2)


def _unroll_budgets(inner_log: float, ln_base: float, steps: int) -> list[int]:
    """Extra bits of tolerance for the inner value and each unroll step.

    Index 0 is the innermost value; index i >= 1 is the i-th tower step.
    An error entering step i is amplified by about exp(step output) * ln(base)
    through every later step, so earlier stages need geometrically (in the
    tower magnitudes) tighter tolerances.  Blow-ups past the magnitude cap
    surface here, before any expensive arithmetic runs.
    """
    ln_ln_base = math.log(max(ln_base, 1e-300))
    blow_threshold = math.log(_LN_VALUE_CAP) - ln_ln_base
    level = inner_log
    gains = []  # log2 of each step's amplification factor
    for _ in range(steps):
        if level > blow_threshold:  # exp(level) * ln_base would pass the cap
            raise MagnitudeError("tower magnitude exceeds the configured cap")
        out = math.exp(level) * ln_base
        if out > _LN_VALUE_CAP:
            raise MagnitudeError("tower magnitude exceeds the configured cap")
        gains.append(max(0.0, (out + ln_ln_base) / math.log(2)))
        level = out
    budgets = [0] * (steps + 1)
    suffix = 0.0
    for i in range(steps, 0, -1):
        budgets[i] = math.ceil(suffix) + (steps - i) + 2
        suffix += gains[i - 1]
    budgets[0] = math.ceil(suffix) + steps + 4
    return budgets


# ---------------------------------------------------------------------------
# super-root family


def hyper_inverse_minus(
    rank: int,
    a: Fraction | Ball,
    b: Fraction | Ball,
    tol: Fraction,
    *,
    limits: EngineLimits = _DEFAULT_LIMITS,
) -> Ball:
    """Ball containing the x >= 1 with x (+^rank) b = a, for a >= 1, b > 0."""
    if rank < 4:
        raise DomainError(f"hyper_inverse_minus needs rank >= 4, got {rank}")
    if tol <= 0:
        raise ValueError("precision target must be positive")
    order = _height_fraction(b, rank=rank)
    if order <= 0:
        raise DomainError("super-root order must be positive")
    target = _value_ball(a)
    if (target.is_exact and target.center < 1) or target.hi < 1:
        raise DomainError("super-roots are defined for values >= 1")
    return _inverse_minus(rank, target, order, tol, limits)


def _inverse_minus(rank: int, target: Ball, order: Fraction, tol: Fraction,
                   limits: EngineLimits) -> Ball:
    if target.is_exact and target.center == 1:
        return Ball(Fraction(1))
    if order == 1:
        return target
    if order.denominator != 1 and order < 1:
        # x (-^r) (p/q) = (x (+^r) q) (-^r) p for fractional orders below 1
        p, q = order.numerator, order.denominator
        if limits.verify_split:
            farey.locate(p, q)
        try:
            grown = _forward(rank, target, Fraction(q), tol / 8, limits)
        except MagnitudeError as err:
            # an intermediate of the construction, not the result itself
            raise ResourceError(str(err)) from err
        return _inverse_minus(rank, grown, Fraction(p), tol, limits)
    if not target.is_exact:
        lo = _inverse_minus(rank, Ball(max(target.lo, Fraction(1))), order,
                            tol / 2, limits)
        hi = _inverse_minus(rank, Ball(target.hi), order, tol / 2, limits)
        return round_ball(hull(lo, hi), tol_bits(tol) + 16)

    goal = target.center  # exact rational > 1
    goal_bits = goal.numerator.bit_length() - goal.denominator.bit_length()

    def f(x: Fraction, ft: Fraction) -> Ball:
        try:
            return _forward(rank, Ball(x), order, ft, limits) - goal
        except MagnitudeError:
            # a tower past the magnitude cap certainly exceeds the goal
            if goal_bits < midops.MAX_MAGNITUDE_BITS - 64:
                return Ball(abs(goal) + 2)
            raise

    bracket = Bracket(Fraction(1), goal, -1, 1)
    cfg = RootConfig(tol, limits.root_iterations, limits.root_expansions)
    style = "interpolate" if rank == 4 else "mediant"
    return brent(f, bracket, cfg, probe=style)


# ---------------------------------------------------------------------------
# super-log family


def hyper_inverse_slash(
    rank: int,
    a: Fraction | Ball,
    b: Fraction | Ball,
    tol: Fraction,
    *,
    limits: EngineLimits = _DEFAULT_LIMITS,
) -> Ball:
    """Ball containing the x >= 0 with b (+^rank) x = a, for a > 1, b > 1."""
    if rank < 4:
        raise DomainError(f"hyper_inverse_slash needs rank >= 4, got {rank}")
    if tol <= 0:
        raise ValueError("precision target must be positive")
    target = _value_ball(a)
    base = _value_ball(b)
    for name, ball in (("value", target), ("base", base)):
        if ball.is_exact:
            if ball.center <= 1:
                raise DomainError(f"super-log {name} must be > 1")
        elif ball.lo <= 1:
            if ball.hi <= 1:
                raise DomainError(f"super-log {name} must be > 1")
            raise PrecisionError(f"super-log {name} interval reaches 1")
    if target.is_exact and base.is_exact and target.center == base.center:
        return Ball(Fraction(1))
    if not target.is_exact:
        lo = hyper_inverse_slash(rank, Ball(target.lo), base, tol / 2, limits=limits)
        hi = hyper_inverse_slash(rank, Ball(target.hi), base, tol / 2, limits=limits)
        return round_ball(hull(lo, hi), tol_bits(tol) + 16)

    goal = target.center
    goal_bits = goal.numerator.bit_length() - goal.denominator.bit_length()

    def tower(x: Fraction, ft: Fraction) -> Ball:
        try:
            return _forward(rank, base, x, ft, limits)
        except MagnitudeError:
            # beyond the magnitude cap the tower certainly exceeds any goal
            # small enough to compare against it
            if goal_bits < midops.MAX_MAGNITUDE_BITS - 64:
                return Ball(2 * abs(goal) + 2)
            raise

    cfg = RootConfig(tol, limits.root_iterations, limits.root_expansions)
    bracket = expand_upper(tower, goal, cfg)
    return brent(lambda x, ft: tower(x, ft) - goal, bracket, cfg, probe="mediant")
