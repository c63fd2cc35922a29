"""Rank-3 operations: exponential, natural log, power, root, logarithm.

`exp_e` and `ln_e` are Taylor/atanh series evaluated in integer fixed point
with explicit ulp accounting, so results are rigorous Balls:

  exp(x) = sum x^n/n!          after halving the argument into |x| <= 1,
                               tail < |x|^(N+1)/(N+1)! * (N+2)/(N+1);
  ln(m)  = 2 sum b^(2n+1)/(2n+1),  b = (m-1)/(m+1), after scaling m into
                               [1/2, 2) so |b| <= 1/3; geometric tail.

The general power `[a+++b]` is exp(b * ln a), root `[a---b]` is
pow(a, 1/b), and log `[a///b]` is ln a / ln b.  Integer exponents take an
exact path when the result stays representable.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .balls import Ball, as_ball, divide, from_endpoints, round_ball
from .errors import DomainError, MagnitudeError, PrecisionError, ResourceError

# Any value whose integer part would exceed 2^MAX_MAGNITUDE_BITS is treated
# as a blow-up; exp() arguments are capped at MAX_MAGNITUDE_BITS * ln 2.
MAX_MAGNITUDE_BITS = 1 << 20
_EXP_ARG_CAP = 726_817  # floor(2^20 * ln 2)

_REFINE_ATTEMPTS = 9


@dataclass(frozen=True)
class SeriesConfig:
    target_error: Fraction
    max_terms: int = 100_000

    def __post_init__(self):
        if self.target_error <= 0:
            raise ValueError("target error must be positive")
        if self.max_terms < 1:
            raise ValueError("max terms must be positive")


DEFAULT_SERIES = SeriesConfig(Fraction(1, 10**30))


def _cfg(cfg: SeriesConfig | None) -> SeriesConfig:
    return cfg if cfg is not None else DEFAULT_SERIES


def tol_bits(tol: Fraction) -> int:
    """Bits b with 2^-b <= tol."""
    if tol >= 1:
        return 1
    return (tol.denominator // tol.numerator).bit_length() + 1


def _fix(x: Fraction, scale: int) -> int:
    """Round x * scale to the nearest integer."""
    return (2 * x.numerator * scale + x.denominator) // (2 * x.denominator)


def _idiv_nearest(a: int, b: int) -> int:
    return (2 * a + b) // (2 * b)


# ---------------------------------------------------------------------------
# fixed-point kernels


def _exp_series_fixed(x: Fraction, prec: int, max_terms: int) -> tuple[int, int]:
    """(value, error) in 2^-prec ulps of exp(x) for |x| <= 1."""
    scale = 1 << prec
    xf = _fix(x, scale)
    acc = scale + xf
    term = xf
    n = 1
    while not (abs(term) <= 2 and n >= 2):
        n += 1
        if n > max_terms:
            raise ResourceError("exp series exceeded the term budget")
        term = _idiv_nearest(term * xf, scale * n)
        acc += term
    # per-term rounding <= 1 ulp each, tail <= 2*(|term|+1) <= 6, snap <= 2
    return acc, n + 10


def _atanh_series_fixed(b: Fraction, prec: int, max_terms: int) -> tuple[int, int]:
    """(value, error) in ulps of 2*sum b^(2n+1)/(2n+1) = 2*atanh(b), |b| <= 1/3."""
    scale = 1 << prec
    bf = _fix(b, scale)
    b2 = _idiv_nearest(bf * bf, scale)
    acc = bf
    power = bf
    n = 1
    while abs(power) > 2:
        if n > max_terms:
            raise ResourceError("log series exceeded the term budget")
        power = _idiv_nearest(power * b2, scale)
        acc += _idiv_nearest(power, 2 * n + 1)
        n += 1
    return 2 * acc, 3 * n + 10


@functools.lru_cache(maxsize=None)
def _ln2_fixed(prec: int) -> tuple[int, int]:
    # ln 2 = 2*atanh(1/3)
    return _atanh_series_fixed(Fraction(1, 3), prec, 100_000)


# ---------------------------------------------------------------------------
# exp / ln


def _exp_rational(a: Fraction, tol: Fraction, max_terms: int) -> Ball:
    if a > _EXP_ARG_CAP:
        raise MagnitudeError("exp argument too large; result would blow past the magnitude cap")
    if a == 0:
        return Ball(Fraction(1))
    halvings = 0
    x = a
    while abs(x) > 1:
        x = x / 2
        halvings += 1
    mag_bits = 2 if a <= 0 else (3 * a.numerator) // (2 * a.denominator) + 2
    prec = tol_bits(tol) + 2 * halvings + mag_bits + 24
    for _ in range(_REFINE_ATTEMPTS):
        scale = 1 << prec
        value, err = _exp_series_fixed(x, prec, max_terms)
        out = Ball(Fraction(value, scale), Fraction(err, scale))
        for _ in range(halvings):
            out = round_ball(out * out, prec)
        out = round_ball(out, prec)
        if out.radius <= tol:
            return out
        prec = prec * 2 + 16
    raise PrecisionError("exp failed to reach the requested radius")


def _ln_rational(a: Fraction, tol: Fraction, max_terms: int) -> Ball:
    if a <= 0:
        raise DomainError("log of a non-positive value")
    if a == 1:
        return Ball(Fraction(0))
    # scale by powers of two into [1/2, 2)
    shift = a.numerator.bit_length() - a.denominator.bit_length()
    m = a / Fraction(2) ** shift
    if m >= 2:
        m /= 2
        shift += 1
    elif m < Fraction(1, 2):
        m *= 2
        shift -= 1
    prec = tol_bits(tol) + max(1, abs(shift)).bit_length() + 24
    b = (m - 1) / (m + 1)
    for _ in range(_REFINE_ATTEMPTS):
        scale = 1 << prec
        value, err = _atanh_series_fixed(b, prec, max_terms)
        if shift:
            ln2, ln2_err = _ln2_fixed(prec)
            value += shift * ln2
            err += abs(shift) * ln2_err
        out = round_ball(Ball(Fraction(value, scale), Fraction(err, scale)), prec)
        if out.radius <= tol:
            return out
        prec = prec * 2 + 16
    raise PrecisionError("ln failed to reach the requested radius")


def exp_e(a: Fraction | Ball, cfg: SeriesConfig | None = None) -> Ball:
    """Ball containing e^a with radius <= the configured target error."""
    cfg = _cfg(cfg)
    tol = cfg.target_error
    b = as_ball(a) if isinstance(a, Ball) else Ball(Fraction(a))
    if b.is_exact:
        return _exp_rational(b.center, tol, cfg.max_terms)
    if b.radius > Fraction(1, 2):
        raise PrecisionError("exp argument too imprecise")
    core = _exp_rational(b.center, tol / 2, cfg.max_terms)
    # e^(c +/- r) within e^c * e^(+/-r), and e^r - 1 <= 2r for r <= ln 2
    extra = 2 * b.radius * (core.center + core.radius)
    return round_ball(Ball(core.center, core.radius + extra), tol_bits(tol) + 16)


def ln_e(a: Fraction | Ball, cfg: SeriesConfig | None = None) -> Ball:
    """Ball containing ln a (a > 0) with radius <= the target error."""
    cfg = _cfg(cfg)
    tol = cfg.target_error
    b = as_ball(a) if isinstance(a, Ball) else Ball(Fraction(a))
    if b.is_exact:
        return _ln_rational(b.center, tol, cfg.max_terms)
    if b.lo <= 0:
        if b.hi <= 0:
            raise DomainError("log of a non-positive value")
        raise PrecisionError("log argument interval reaches zero")
    core = _ln_rational(b.center, tol / 2, cfg.max_terms)
    extra = b.radius / b.lo  # Lipschitz bound 1/min on [lo, hi]
    return round_ball(Ball(core.center, core.radius + extra), tol_bits(tol) + 16)


# ---------------------------------------------------------------------------
# power / root / log


def _exact_int_pow(base: Fraction, n: int) -> Fraction | None:
    """base**n when the representation stays within the magnitude cap."""
    digits = max(base.numerator.bit_length(), base.denominator.bit_length())
    if digits * abs(n) > MAX_MAGNITUDE_BITS + 64:
        return None
    return base**n


def power(a: Fraction | Ball, b: Fraction | Ball, cfg: SeriesConfig | None = None) -> Ball:
    """Ball containing a^b.

    Domain: a > 0 with any rational/ball b; a < 0 only with an exact
    integer b (sign by parity); a = 0 only with exact b > 0.
    """
    cfg = _cfg(cfg)
    tol = cfg.target_error
    av = a if isinstance(a, Ball) else Ball(Fraction(a))
    bv = b if isinstance(b, Ball) else Ball(Fraction(b))

    if av.is_exact and av.center == 0:
        if bv.is_exact and bv.center > 0:
            return Ball(Fraction(0))
        raise DomainError("0 may only be raised to an exact positive power")
    if av.is_exact and av.center < 0:
        if not (bv.is_exact and bv.center.denominator == 1):
            raise DomainError("negative base needs an exact integer exponent")
        n = bv.center.numerator
        flip = n % 2 == 1
        out = power(Ball(-av.center), bv, cfg)
        return Ball(-out.center, out.radius) if flip else out
    if av.hi < 0 and bv.is_exact and bv.center.denominator == 1:
        n = bv.center.numerator
        out = power(Ball(-av.center, av.radius), bv, cfg)
        return Ball(-out.center, out.radius) if n % 2 == 1 else out

    if av.is_exact and av.center == 1:
        return Ball(Fraction(1))
    if bv.is_exact:
        if bv.center == 0:
            return Ball(Fraction(1))
        if bv.center == 1:
            return round_ball(av, tol_bits(tol) + 16) if not av.is_exact else av
        if bv.center.denominator == 1 and av.is_exact:
            exact = _exact_int_pow(av.center, bv.center.numerator)
            if exact is not None:
                return Ball(exact)
            if av.center > 1 and bv.center > 0:
                raise MagnitudeError("integer power exceeds the magnitude cap")

    if av.lo <= 0:
        if av.hi <= 0:
            raise DomainError("power base must be positive")
        raise PrecisionError("power base interval reaches zero")

    # Refine only the computational error; spread inherited from ball inputs
    # is propagated rigorously but cannot be shrunk here, so it rides on top
    # of the target (whole-expression refinement re-requests tighter inputs).
    ln_tol = tol / (1 << _power_scale_bits(av, bv))
    ln_input = av.radius / av.lo  # Lipschitz bound for ln over [lo, hi]
    for _ in range(_REFINE_ATTEMPTS):
        ln_core = _ln_rational(av.center, ln_tol, cfg.max_terms)
        exp_center = bv.center * ln_core.center
        r_comp = abs(bv.center) * ln_core.radius
        r_input = abs(bv.center) * ln_input + bv.radius * (
            abs(ln_core.center) + ln_core.radius + ln_input
        )
        if exp_center > _EXP_ARG_CAP:
            raise MagnitudeError("power result would blow past the magnitude cap")
        if r_comp > Fraction(1, 8):
            ln_tol /= 16
            continue
        if r_input > Fraction(1, 2):
            raise PrecisionError("power inputs too imprecise for an enclosure")
        core = _exp_rational(exp_center, tol / 4, cfg.max_terms)
        bound = core.center + core.radius
        widen_comp = 2 * r_comp * bound  # e^r - 1 <= 2r for r <= ln 2
        if widen_comp > tol / 2:
            ln_tol /= 16
            continue
        widen_input = 2 * r_input * bound
        out = Ball(core.center, core.radius + widen_comp + widen_input)
        return round_ball(out, tol_bits(tol + widen_input) + 16)
    raise PrecisionError("power failed to reach the requested radius")


def _log_abs_float(x: Fraction) -> float:
    """Rough ln|x| for a nonzero rational of any magnitude."""
    shift = x.numerator.bit_length() - x.denominator.bit_length()
    m = abs(x) / Fraction(2) ** shift
    return math.log(float(m)) + shift * math.log(2)


def _power_scale_bits(av: Ball, bv: Ball) -> int:
    """Extra tolerance bits the exponent needs for |result| = e^(b ln a).

    The absolute output error scales with the result magnitude times the
    exponent's error, and the exponent's error scales with |b| times the
    log's error; a magnitude-blind starting tolerance would take thousands
    of refinement rounds on tower-sized values.  Blow-ups surface here
    before any expensive arithmetic runs.
    """
    ln2 = math.log(2)
    ln_a = _log_abs_float(av.center) if av.center != 1 else 0.0
    b_log = _log_abs_float(bv.center) if bv.center != 0 else -1e9
    positive = (bv.center > 0) == (ln_a > 0)
    if ln_a == 0.0:
        magnitude = 0.0
    else:
        ln_exponent = b_log + math.log(abs(ln_a))
        if ln_exponent > math.log(_EXP_ARG_CAP):
            if positive:
                raise MagnitudeError("power result would blow past the magnitude cap")
            magnitude = 0.0
        else:
            magnitude = math.exp(ln_exponent) / ln2 if positive else 0.0
    return math.ceil(magnitude + max(0.0, b_log) / ln2) + 16


def root(a: Fraction | Ball, b: Fraction | Ball, cfg: SeriesConfig | None = None) -> Ball:
    """Ball containing the b-th root of a: the x with x^b = a (a > 0, b != 0)."""
    bv = b if isinstance(b, Ball) else Ball(Fraction(b))
    if bv.is_exact:
        if bv.center == 0:
            raise DomainError("0th root")
        recip: Fraction | Ball = 1 / bv.center
    else:
        recip = divide(Ball(Fraction(1)), bv)
    av = a if isinstance(a, Ball) else Ball(Fraction(a))
    if (av.is_exact and av.center <= 0) or (not av.is_exact and av.hi <= 0):
        raise DomainError("root base must be positive")
    return power(a, recip, cfg)


def log(a: Fraction | Ball, b: Fraction | Ball, cfg: SeriesConfig | None = None) -> Ball:
    """Ball containing log base b of a (a > 0, b > 0, b != 1)."""
    cfg = _cfg(cfg)
    tol = cfg.target_error
    av = a if isinstance(a, Ball) else Ball(Fraction(a))
    bv = b if isinstance(b, Ball) else Ball(Fraction(b))
    if bv.is_exact and bv.center == 1:
        raise DomainError("log base 1")
    if av.is_exact and bv.is_exact:
        if av.center == bv.center and av.center > 1:
            return Ball(Fraction(1))
        if av.center == 1 and bv.center > 0:
            return Ball(Fraction(0))
    for name, ball in (("value", av), ("base", bv)):
        if (ball.is_exact and ball.center <= 0) or ball.hi <= 0:
            raise DomainError(f"log {name} must be positive")
        if ball.lo <= 0:
            raise PrecisionError(f"log {name} interval reaches zero")
    extra_a = av.radius / av.lo
    extra_b = bv.radius / bv.lo
    inner_tol = tol
    for _ in range(_REFINE_ATTEMPTS):
        ln_a = _ln_rational(av.center, inner_tol, cfg.max_terms)
        ln_b = _ln_rational(bv.center, inner_tol, cfg.max_terms)
        denom = Ball(ln_b.center, ln_b.radius + extra_b)
        if denom.lo <= 0 <= denom.hi:
            if bv.is_exact:  # b != 1 exactly, so tightening must separate it
                inner_tol /= 16
                continue
            raise PrecisionError("log base interval reaches 1")
        # computational part alone must meet the target; input spread rides
        core = divide(ln_a, ln_b)
        if core.radius > tol:
            inner_tol /= 16
            continue
        full = divide(Ball(ln_a.center, ln_a.radius + extra_a), denom)
        return round_ball(full, tol_bits(tol + (full.radius - core.radius)) + 16)
    raise PrecisionError("log failed to reach the requested radius")
