"""
Short-Weierstrass curves y^2 = x^3 + a x + b over F_q and their trace of Frobenius.

The trace a(E) = q + 1 - #E(F_q) is computed three ways:
- by exhaustive point counting (the oracle),
- from the Weierstrass-coefficient formula
      -q T^((q-1)/4)(a^3/27) 2F1(T^((q-1)/12), T^(5(q-1)/12); T^((q-1)/2) | -27b^2/(4a^3)),
- from the j-invariant formula
      -q T^((q-1)/12)(1728/Delta) 2F1(T^((q-1)/12), T^((q-1)/12); T^(2(q-1)/3) | j/1728).
Both formulas need q = 1 (mod 12) and j not in {0, 1728}. Over F_p with
p != 1 (mod 12) the j-invariant formula still applies over F_{p^2}, which fixes
a(E(F_p)) up to sign through a(E(F_p))^2 = a(E(F_{p^2})) + 2p.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .characters import ComplexValue, mult_char_eval, mult_char_values
from .charsums import GaussTable, gauss_table_for
from .config import tolerance_for
from .errors import (
    BadArgument,
    BadFieldCongruence,
    ContextMismatch,
    HasseBoundViolation,
    JInvariant1728,
    JInvariantZero,
    NotAPerfectSquare,
    RoundingFailure,
    SingularCurve,
)
from .field import FieldContext, FieldElement, embed_base, random_element
from .hypergeo import HypergeoParams, eval_series

logger = logging.getLogger(__name__)


class TraceMethod(Enum):
    """Ways of obtaining the trace; values are the CLI spellings."""
    J_INVARIANT = "thm1"
    WEIERSTRASS = "thm2"
    ORACLE = "oracle"


@dataclass(frozen=True)
class Curve:
    """E: y^2 = x^3 + a x + b."""
    a: FieldElement
    b: FieldElement

    def __post_init__(self):
        if self.a.ctx is not self.b.ctx:
            raise ContextMismatch("curve coefficients live in different fields",
                                  hypothesis="a and b share a field context")

    @property
    def ctx(self) -> FieldContext:
        return self.a.ctx

    @classmethod
    def from_indices(cls, ctx: FieldContext, a_idx: int, b_idx: int) -> "Curve":
        return cls(ctx.element(a_idx), ctx.element(b_idx))

    def in_context(self, ctx: FieldContext) -> "Curve":
        """Same coefficient indices in another construction of the same field (e.g. another generator)."""
        if (ctx.p, ctx.e, ctx.modulus) != (self.ctx.p, self.ctx.e, self.ctx.modulus):
            raise ContextMismatch("target field has a different polynomial basis",
                                  hypothesis="same p, e and modulus")
        return Curve.from_indices(ctx, self.a.index, self.b.index)

    def __repr__(self) -> str:
        return f"Curve(a={self.a.index}, b={self.b.index} over F_{self.ctx.q})"


@dataclass(frozen=True)
class TraceValue:
    trace: int
    residual: float


@dataclass(frozen=True)
class SubfieldTrace:
    abs_trace: int
    candidates: Tuple[int, ...]
    trace_over_square_field: int


@dataclass
class TraceReport:
    """Formula-derived and oracle-derived traces for one curve; None marks a method not run."""
    p: int
    e: int
    q: int
    a_idx: int
    b_idx: int
    j: Optional[int]
    delta: int
    trace_thm1: Optional[int]
    trace_thm2: Optional[int]
    trace_oracle: Optional[int]
    residual_thm1: Optional[float]
    residual_thm2: Optional[float]
    agree: bool

    FIELDS = ("p", "e", "q", "a", "b", "j", "delta", "trace_thm1", "trace_thm2", "trace_oracle",
              "residual_thm1", "residual_thm2", "agree")

    def to_dict(self) -> Dict[str, object]:
        """Record in the fixed output schema; field elements as canonical indices."""
        return {
            "p": self.p,
            "e": self.e,
            "q": self.q,
            "a": self.a_idx,
            "b": self.b_idx,
            "j": self.j,
            "delta": self.delta,
            "trace_thm1": self.trace_thm1,
            "trace_thm2": self.trace_thm2,
            "trace_oracle": self.trace_oracle,
            "residual_thm1": self.residual_thm1,
            "residual_thm2": self.residual_thm2,
            "agree": self.agree,
        }


# Invariants

def discriminant(curve: Curve) -> FieldElement:
    a, b = curve.a, curve.b
    return -16 * (4 * a ** 3 + 27 * b ** 2)


def j_invariant(curve: Curve) -> FieldElement:
    a, b = curve.a, curve.b
    denominator = 4 * a ** 3 + 27 * b ** 2
    if not denominator:
        raise SingularCurve(f"{curve!r} is singular", hypothesis="Delta(E) != 0")
    return 1728 * 4 * a ** 3 / denominator


def is_nonsingular(curve: Curve) -> bool:
    return bool(discriminant(curve))


# Point counting

def _rhs_values(curve: Curve) -> np.ndarray:
    """x^3 + a x + b for every x in F_q, as element indices."""
    ctx = curve.ctx
    x = ctx.indices()
    cubic = ctx.pow_idx(x, 3)
    linear = ctx.mul_idx(x, curve.a.index)
    return ctx.add_idx(ctx.add_idx(cubic, linear), curve.b.index)


def count_points_oracle(curve: Curve) -> int:
    """Projective point count; each x contributes 1 + eta(f(x)) by dlog parity."""
    ctx = curve.ctx
    f = _rhs_values(curve)
    fibers = np.where(f == 0, 1, np.where(ctx.is_square_idx(f), 2, 0))
    return 1 + int(fibers.sum())


def count_points_enumerated(curve: Curve) -> int:
    """Projective point count from the histogram of y^2 over all y."""
    ctx = curve.ctx
    y = ctx.indices()
    square_counts = np.bincount(ctx.mul_idx(y, y), minlength=ctx.q)
    return 1 + int(square_counts[_rhs_values(curve)].sum())


def count_points_character_sum(curve: Curve) -> int:
    """q + 1 + sum_x eta(x^3 + a x + b)."""
    ctx = curve.ctx
    eta_sum = mult_char_values(ctx, (ctx.q - 1) // 2, _rhs_values(curve)).sum()
    return ctx.q + 1 + int(round(eta_sum.real))


def trace_oracle(curve: Curve) -> int:
    return curve.ctx.q + 1 - count_points_oracle(curve)


def within_hasse_bound(trace: int, q: int) -> bool:
    return trace * trace <= 4 * q


# Trace formulas

def _require_formula_domain(curve: Curve) -> None:
    ctx = curve.ctx
    if ctx.q % 12 != 1:
        raise BadFieldCongruence(
            f"q = {ctx.q} is not 1 mod 12",
            hypothesis=f"q = 1 (mod 12) is required by the trace formulas; q = {ctx.q} = {ctx.q % 12} (mod 12)",
        )
    if not is_nonsingular(curve):
        raise SingularCurve(f"{curve!r} is singular", hypothesis="Delta(E) != 0")
    if not curve.a:
        raise JInvariantZero(f"{curve!r} has a = 0", hypothesis="j(E) = 0 is excluded by the trace formulas")
    if not curve.b:
        raise JInvariant1728(f"{curve!r} has b = 0", hypothesis="j(E) = 1728 is excluded by the trace formulas")


def round_trace(value: ComplexValue, q: int, tolerance: Optional[float] = None) -> TraceValue:
    """Nearest integer to value, failing if value is further than tolerance * q from it."""
    trace = int(round(value.real))
    residual = abs(value - trace)
    if residual > tolerance_for(q, tolerance):
        raise RoundingFailure(
            f"trace value {value} is {residual:.3g} from the nearest integer",
            hypothesis="formula value is an integer within tolerance",
        )
    return TraceValue(trace=trace, residual=float(residual))


def weierstrass_params(curve: Curve) -> HypergeoParams:
    n = curve.ctx.q - 1
    a, b = curve.a, curve.b
    return HypergeoParams((n // 12, 5 * n // 12), (n // 2,), -27 * b ** 2 / (4 * a ** 3))


def intermediate_params(curve: Curve) -> HypergeoParams:
    """The Weierstrass series after the 1 - x transformation: lower parameter trivial."""
    n = curve.ctx.q - 1
    a, b = curve.a, curve.b
    return HypergeoParams((n // 12, 5 * n // 12), (0,), (4 * a ** 3 + 27 * b ** 2) / (4 * a ** 3))


def j_invariant_params(curve: Curve) -> HypergeoParams:
    n = curve.ctx.q - 1
    return HypergeoParams((n // 12, n // 12), (2 * n // 3,), j_invariant(curve) / 1728)


def weierstrass_value(curve: Curve, table: Optional[GaussTable] = None) -> ComplexValue:
    _require_formula_domain(curve)
    ctx = curve.ctx
    n = ctx.q - 1
    prefactor = -ctx.q * mult_char_eval(ctx, n // 4, curve.a ** 3 / 27)
    return prefactor * eval_series(ctx, weierstrass_params(curve), table=table)


def j_invariant_value(curve: Curve, table: Optional[GaussTable] = None) -> ComplexValue:
    _require_formula_domain(curve)
    ctx = curve.ctx
    n = ctx.q - 1
    prefactor = -ctx.q * mult_char_eval(ctx, n // 12, 1728 / discriminant(curve))
    return prefactor * eval_series(ctx, j_invariant_params(curve), table=table)


def intermediate_value(curve: Curve, table: Optional[GaussTable] = None) -> ComplexValue:
    _require_formula_domain(curve)
    ctx = curve.ctx
    n = ctx.q - 1
    prefactor = -ctx.q * mult_char_eval(ctx, n // 4, -(curve.a ** 3) / 27)
    return prefactor * eval_series(ctx, intermediate_params(curve), table=table)


def trace_thm2(curve: Curve, table: Optional[GaussTable] = None, tolerance: Optional[float] = None) -> TraceValue:
    """Trace from the Weierstrass-coefficient formula."""
    result = round_trace(weierstrass_value(curve, table), curve.ctx.q, tolerance)
    logger.debug("weierstrass trace of %r: %d (residual %.2e)", curve, result.trace, result.residual)
    return result


def trace_thm1(curve: Curve, table: Optional[GaussTable] = None, tolerance: Optional[float] = None) -> TraceValue:
    """Trace from the j-invariant / discriminant formula."""
    result = round_trace(j_invariant_value(curve, table), curve.ctx.q, tolerance)
    logger.debug("j-invariant trace of %r: %d (residual %.2e)", curve, result.trace, result.residual)
    return result


def trace_intermediate(curve: Curve, table: Optional[GaussTable] = None,
                       tolerance: Optional[float] = None) -> TraceValue:
    return round_trace(intermediate_value(curve, table), curve.ctx.q, tolerance)


def weierstrass_correction_term(curve: Curve) -> ComplexValue:
    """
    T^((q-1)/2)(b) (1 - T^((q-1)/4)(-1) / T^((q-1)/4)(4)), the term separating the
    unsimplified point count from the closed formula; it vanishes for q = 1 (mod 12).
    """
    _require_formula_domain(curve)
    ctx = curve.ctx
    n = ctx.q - 1
    minus_one = -ctx.one
    ratio = mult_char_eval(ctx, n // 4, minus_one) / mult_char_eval(ctx, n // 4, ctx.from_int(4))
    return mult_char_eval(ctx, n // 2, curve.b) * (1 - ratio)


def count_points_thm2_full(curve: Curve, table: Optional[GaussTable] = None) -> ComplexValue:
    """
    q + 1 + correction term + T^((q-1)/4)(a^3/27) q 2F1(...), the point count before the
    correction term is dropped. Should equal #E(F_q).
    """
    return curve.ctx.q + 1 + weierstrass_correction_term(curve) - weierstrass_value(curve, table)


# Sign-ambiguous recovery over the prime field

def trace_from_square(trace_over_square_field: int, p: int) -> SubfieldTrace:
    """Solve t^2 = a(E(F_{p^2})) + 2p for t >= 0."""
    square = trace_over_square_field + 2 * p
    root = math.isqrt(square) if square >= 0 else -1
    if root < 0 or root * root != square:
        raise NotAPerfectSquare(
            f"a(E(F_p^2)) + 2p = {square} is not a perfect square",
            hypothesis="a(E(F_p))^2 = a(E(F_p^2)) + 2p",
        )
    if not within_hasse_bound(root, p):
        raise HasseBoundViolation(f"|t| = {root} exceeds 2 sqrt({p})", hypothesis="|a(E(F_p))| <= 2 sqrt(p)")
    candidates = (0,) if root == 0 else (root, -root)
    return SubfieldTrace(abs_trace=root, candidates=candidates, trace_over_square_field=trace_over_square_field)


def trace_subfield_up_to_sign(curve_over_fp: Curve, ctx2: FieldContext,
                              table: Optional[GaussTable] = None) -> SubfieldTrace:
    """
    |a(E(F_p))| from the j-invariant formula over F_{p^2}.

    Args:
        curve_over_fp: curve over the prime field F_p
        ctx2: F_{p^2}
        table: Gauss table for ctx2
    """
    base = curve_over_fp.ctx
    if base.e != 1 or ctx2.p != base.p or ctx2.e != 2:
        raise BadArgument(
            f"need a curve over F_p and the field F_p^2, got F_{base.q} and F_{ctx2.q}",
            hypothesis="curve over F_p, target field F_{p^2}",
        )
    lifted = Curve(embed_base(ctx2, curve_over_fp.a), embed_base(ctx2, curve_over_fp.b))
    over_square = trace_thm1(lifted, table or gauss_table_for(ctx2))
    return trace_from_square(over_square.trace, base.p)


# Curve families

def quadratic_twist(curve: Curve, d: FieldElement) -> Curve:
    """(a d^2, b d^3) for a non-square d."""
    if not d or d.is_square():
        raise BadArgument(f"{d!r} is a square", hypothesis="twisting element is a non-square")
    return Curve(curve.a * d ** 2, curve.b * d ** 3)


def isomorphic_model(curve: Curve, u: FieldElement) -> Curve:
    """(a u^4, b u^6), isomorphic over F_q for any unit u."""
    if not u:
        raise BadArgument("scaling by zero", hypothesis="u in F_q*")
    return Curve(curve.a * u ** 4, curve.b * u ** 6)


def random_curve(ctx: FieldContext, rng: np.random.Generator) -> Curve:
    """Uniform (a, b) with a, b != 0 and Delta != 0, by rejection."""
    while True:
        curve = Curve(random_element(ctx, rng, nonzero=True), random_element(ctx, rng, nonzero=True))
        if is_nonsingular(curve):
            return curve


# Reports

def trace_report(curve: Curve, table: Optional[GaussTable] = None,
                 methods: Iterable[TraceMethod] = tuple(TraceMethod),
                 tolerance: Optional[float] = None) -> TraceReport:
    """
    Run the requested methods on one curve. Formula errors propagate; `agree`
    holds when every requested method produced the same integer.
    """
    ctx = curve.ctx
    methods = set(methods)
    j = j_invariant(curve) if is_nonsingular(curve) else None
    thm1 = trace_thm1(curve, table, tolerance) if TraceMethod.J_INVARIANT in methods else None
    thm2 = trace_thm2(curve, table, tolerance) if TraceMethod.WEIERSTRASS in methods else None
    oracle = trace_oracle(curve) if TraceMethod.ORACLE in methods else None

    traces = [t for t in (thm1 and thm1.trace, thm2 and thm2.trace, oracle) if t is not None]
    agree = len(set(traces)) <= 1
    if not all(within_hasse_bound(t, ctx.q) for t in traces):
        logger.warning("trace outside the Hasse bound for %r: %s", curve, traces)
    if not agree:
        logger.warning("trace disagreement for %r: thm1=%s thm2=%s oracle=%s", curve,
                       thm1 and thm1.trace, thm2 and thm2.trace, oracle)

    return TraceReport(
        p=ctx.p,
        e=ctx.e,
        q=ctx.q,
        a_idx=curve.a.index,
        b_idx=curve.b.index,
        j=None if j is None else j.index,
        delta=discriminant(curve).index,
        trace_thm1=thm1.trace if thm1 else None,
        trace_thm2=thm2.trace if thm2 else None,
        trace_oracle=oracle,
        residual_thm1=thm1.residual if thm1 else None,
        residual_thm2=thm2.residual if thm2 else None,
        agree=agree,
    )
