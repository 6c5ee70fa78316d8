"""
Multiplicative characters T^m and the additive character theta on F_q.

T is fixed by the field's generator g: T^m(g^k) = omega^(m k) with
omega = exp(2 pi i / (q - 1)), and T^m(0) = 0. The additive character is
theta(a) = zeta^tr(a) with zeta = exp(2 pi i / p). Values are evaluated on
demand from the dlog and trace tables; no character table is stored.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import tolerance_for
from .errors import ZeroArgument
from .field import FieldContext, FieldElement, _require_ctx

logger = logging.getLogger(__name__)

# Numeric carrier for every character sum.
ComplexValue = complex


def root_of_unity(k, n: int):
    """exp(2 pi i k / n) with k reduced mod n first; accepts ints or integer arrays."""
    reduced = np.mod(np.asarray(k, dtype=np.int64), n)
    value = np.exp(2j * np.pi * reduced / n)
    return complex(value) if np.ndim(value) == 0 else value


def mult_char_values(ctx: FieldContext, m: int, indices: Optional[np.ndarray] = None) -> np.ndarray:
    """T^m at each index (all of F_q by default); exact zeros at index 0."""
    idx = ctx.indices() if indices is None else np.asarray(indices, dtype=np.int64)
    n = ctx.q - 1
    k = (ctx.dlog_table[idx] * (m % n)) % n
    return np.where(idx == 0, 0j, root_of_unity(k, n))


def add_char_values(ctx: FieldContext, indices: Optional[np.ndarray] = None) -> np.ndarray:
    """theta at each index (all of F_q by default)."""
    idx = ctx.indices() if indices is None else np.asarray(indices, dtype=np.int64)
    return root_of_unity(ctx.trace_table[idx], ctx.p)


def mult_char_eval(ctx: FieldContext, m: int, x: FieldElement) -> ComplexValue:
    _require_ctx(ctx, x)
    if x.index == 0:
        return 0j
    return root_of_unity(int(ctx.dlog_table[x.index]) * (m % (ctx.q - 1)), ctx.q - 1)


def add_char_eval(ctx: FieldContext, x: FieldElement) -> ComplexValue:
    _require_ctx(ctx, x)
    return root_of_unity(int(ctx.trace_table[x.index]), ctx.p)


@dataclass(frozen=True)
class MultCharacter:
    """The character T^m; m is kept reduced mod q - 1."""
    ctx: FieldContext
    m: int

    def __post_init__(self):
        object.__setattr__(self, "m", int(self.m) % (self.ctx.q - 1))

    def __call__(self, x: FieldElement) -> ComplexValue:
        return mult_char_eval(self.ctx, self.m, x)

    def values(self) -> np.ndarray:
        return mult_char_values(self.ctx, self.m)

    @property
    def order(self) -> int:
        n = self.ctx.q - 1
        return n // int(np.gcd(self.m, n))

    @property
    def is_trivial(self) -> bool:
        return self.m == 0

    def __mul__(self, other: "MultCharacter") -> "MultCharacter":
        return MultCharacter(self.ctx, self.m + other.m)

    def __pow__(self, k: int) -> "MultCharacter":
        return MultCharacter(self.ctx, self.m * k)

    def conjugate(self) -> "MultCharacter":
        return MultCharacter(self.ctx, -self.m)


@dataclass(frozen=True)
class AdditiveChar:
    """theta(a) = zeta^tr(a)."""
    ctx: FieldContext

    def __call__(self, x: FieldElement) -> ComplexValue:
        return add_char_eval(self.ctx, x)

    def values(self) -> np.ndarray:
        return add_char_values(self.ctx)


def quadratic_character(ctx: FieldContext) -> MultCharacter:
    """eta = T^((q-1)/2), the Legendre-type character of odd q."""
    return MultCharacter(ctx, (ctx.q - 1) // 2)


def orthogonality_sum(ctx: FieldContext, m: int) -> ComplexValue:
    """sum over F_q* of T^m(x): q - 1 for the trivial character, else 0."""
    return complex(mult_char_values(ctx, m)[1:].sum())


def indicator_sum(ctx: FieldContext, v: FieldElement) -> ComplexValue:
    """sum over z in F_q of theta(z v); q when v = 0 and 0 otherwise."""
    _require_ctx(ctx, v)
    zv = ctx.mul_idx(ctx.indices(), v.index)
    return complex(add_char_values(ctx, zv).sum())


def count_zeros_by_indicator(ctx: FieldContext, values: np.ndarray) -> ComplexValue:
    """
    Number of zeros among `values` (element indices) via the indicator identity:
    (1/q) sum_z sum_v theta(z v). O(q * len(values)).
    """
    values = np.asarray(values, dtype=np.int64).ravel()
    total = 0j
    for z in range(ctx.q):
        total += add_char_values(ctx, ctx.mul_idx(values, z)).sum()
    return total / ctx.q


@dataclass(frozen=True)
class ThetaExpansion:
    lhs: ComplexValue
    rhs: ComplexValue
    max_deviation: float

    def passed(self, q: int, tolerance: Optional[float] = None) -> bool:
        return self.max_deviation < tolerance_for(q, tolerance)


def theta_expansion_check(ctx: FieldContext, alpha: FieldElement, table=None) -> ThetaExpansion:
    """
    Compare theta(alpha) with (1/(q-1)) sum_m G_{-m} T^m(alpha) for alpha != 0.

    Args:
        table: optional GaussTable for ctx; the cached one is used otherwise.
    """
    from .charsums import gauss_table_for

    _require_ctx(ctx, alpha)
    if alpha.index == 0:
        raise ZeroArgument(
            "theta expansion is stated for nonzero arguments only",
            hypothesis="alpha in F_q*",
        )
    gauss = (table or gauss_table_for(ctx)).values
    n = ctx.q - 1
    m = np.arange(n, dtype=np.int64)
    k = int(ctx.dlog_table[alpha.index])
    rhs = complex((gauss[(-m) % n] * root_of_unity(m * k, n)).sum() / n)
    lhs = add_char_eval(ctx, alpha)
    return ThetaExpansion(lhs=lhs, rhs=rhs, max_deviation=abs(lhs - rhs))
