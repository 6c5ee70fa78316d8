"""
Gaussian hypergeometric series over F_q and two of their transformation laws.

Characters are written by exponent: A stands for T^A. The series

    (n+1)F(n)(A_0 ... A_n; B_1 ... B_n | x)
        = q/(q-1) * sum_chi (A_0 chi over chi) (A_1 chi over B_1 chi) ... chi(x)

is evaluated as one vectorised sum over chi = T^i. Each binomial factor comes
from the Gauss table when A_k - B_k is nontrivial and from a directly summed
Jacobi sum otherwise.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from .characters import ComplexValue, mult_char_eval, root_of_unity
from .charsums import GaussTable, IdentityCheck, binom, binom_from_gauss, gauss_table_for
from .errors import BadArgument
from .field import FieldContext, FieldElement, _require_ctx

logger = logging.getLogger(__name__)


class BinomialPath(Enum):
    """Where the binomial coefficients of a series come from."""
    GAUSS = "gauss"
    JACOBI = "jacobi"


@dataclass(frozen=True)
class HypergeoParams:
    numerator_exponents: Tuple[int, ...]
    denominator_exponents: Tuple[int, ...]
    argument: FieldElement

    def __post_init__(self):
        object.__setattr__(self, "numerator_exponents", tuple(int(a) for a in self.numerator_exponents))
        object.__setattr__(self, "denominator_exponents", tuple(int(b) for b in self.denominator_exponents))
        if len(self.numerator_exponents) != len(self.denominator_exponents) + 1:
            raise BadArgument(
                "a series needs exactly one more numerator than denominator parameter",
                hypothesis="len(A) = len(B) + 1",
            )

    @classmethod
    def two_f_one(cls, a: int, b: int, c: int, x: FieldElement) -> "HypergeoParams":
        return cls((a, b), (c,), x)

    def pairs(self) -> Sequence[Tuple[int, int]]:
        """(A_k, B_k) with B_0 = epsilon."""
        return list(zip(self.numerator_exponents, (0,) + self.denominator_exponents))


def _binomial_column(ctx: FieldContext, table: GaussTable, a: int, b: int, path: BinomialPath) -> np.ndarray:
    """(T^(a+i) over T^(b+i)) for every i in [0, q-2]."""
    n = ctx.q - 1
    i = np.arange(n, dtype=np.int64)
    if path is BinomialPath.GAUSS and (a - b) % n != 0:
        half = n // 2 if ctx.q % 2 else 0
        sign = root_of_unity((b + i) * half, n)  # T^(b+i)(-1), dlog(-1) = (q-1)/2
        return table.take(a + i) * table.take(-(b + i)) * sign / (table[a - b] * ctx.q)
    return np.array([binom(ctx, a + k, b + k) for k in range(n)], dtype=np.complex128)


def eval_series(ctx: FieldContext, params: HypergeoParams, table: Optional[GaussTable] = None,
                path: BinomialPath = BinomialPath.GAUSS) -> ComplexValue:
    """
    Evaluate the series at params.argument.

    Args:
        table: Gauss table for ctx (the cached one by default)
        path: GAUSS uses the Gauss-sum form of each binomial where it applies,
            JACOBI sums every binomial from its definition (O(q^2))
    """
    _require_ctx(ctx, params.argument)
    x = params.argument
    if x.index == 0:
        return 0j
    table = table or gauss_table_for(ctx)
    n = ctx.q - 1
    terms = root_of_unity(np.arange(n, dtype=np.int64) * int(ctx.dlog_table[x.index]), n)
    for a, b in params.pairs():
        terms = terms * _binomial_column(ctx, table, a, b, path)
    return complex(ctx.q / n * terms.sum())


def eval_2f1(ctx: FieldContext, a: int, b: int, c: int, x: FieldElement,
             table: Optional[GaussTable] = None) -> ComplexValue:
    """2F1(A, B; C | x) summed term by term over the characters."""
    _require_ctx(ctx, x)
    if x.index == 0:
        return 0j
    table = table or gauss_table_for(ctx)
    n = ctx.q - 1

    def factor(top: int, bottom: int) -> complex:
        if (top - bottom) % n:
            return binom_from_gauss(table, top, bottom)
        return binom(ctx, top, bottom)

    total = 0j
    for i in range(n):
        total += factor(a + i, i) * factor(b + i, c + i) * mult_char_eval(ctx, i, x)
    return ctx.q / n * total


def two_f_one(ctx: FieldContext, a: int, b: int, c: int, x: FieldElement,
              table: Optional[GaussTable] = None) -> ComplexValue:
    return eval_series(ctx, HypergeoParams.two_f_one(a, b, c, x), table=table)


# Parameter maps of the two transformations, exponents reduced mod q - 1.

def one_minus_params(ctx: FieldContext, a: int, b: int, c: int) -> Tuple[int, int, int]:
    n = ctx.q - 1
    return a % n, b % n, (a + b - c) % n


def one_over_params(ctx: FieldContext, a: int, b: int, c: int) -> Tuple[int, int, int]:
    n = ctx.q - 1
    return a % n, (a - c) % n, (a - b) % n


def transform_1_minus_x(ctx: FieldContext, a: int, b: int, c: int, x: FieldElement,
                        table: Optional[GaussTable] = None) -> IdentityCheck:
    """2F1(A, B; C | x) against A(-1) 2F1(A, B; AB C-bar | 1 - x), for x not in {0, 1}."""
    _require_ctx(ctx, x)
    if x.index == 0 or x == ctx.one:
        raise BadArgument("the 1 - x transformation needs x != 0, 1", hypothesis="x not in {0, 1}")
    lhs = two_f_one(ctx, a, b, c, x, table)
    rhs = mult_char_eval(ctx, a, -ctx.one) * two_f_one(ctx, *one_minus_params(ctx, a, b, c), 1 - x, table)
    return IdentityCheck.of(lhs, rhs)


def transform_1_over_x(ctx: FieldContext, a: int, b: int, c: int, x: FieldElement,
                       table: Optional[GaussTable] = None) -> IdentityCheck:
    """2F1(A, B; C | x) against ABC(-1) A-bar(x) 2F1(A, A C-bar; A B-bar | 1/x), for x != 0."""
    _require_ctx(ctx, x)
    if x.index == 0:
        raise BadArgument("the 1/x transformation needs x != 0", hypothesis="x in F_q*")
    prefactor = mult_char_eval(ctx, a + b + c, -ctx.one) * mult_char_eval(ctx, -a, x)
    rhs = prefactor * two_f_one(ctx, *one_over_params(ctx, a, b, c), x.inverse(), table)
    lhs = two_f_one(ctx, a, b, c, x, table)
    return IdentityCheck.of(lhs, rhs)
