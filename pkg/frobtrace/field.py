"""
Prime-power finite fields F_{p^e}.

Elements are packed as integers: the coefficient vector (c_0, ..., c_{e-1}) of
c_0 + c_1 x + ... + c_{e-1} x^{e-1} is stored little-endian in base p, so the
prime subfield is exactly the indices [0, p). A FieldContext precomputes the
discrete-log, exponential and trace tables, after which every operation is a
table lookup or a digit-wise numpy operation. All `*_idx` helpers accept either
a Python int or a numpy integer array of indices.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcd, gf_mul, gf_pow_mod, gf_rem, gf_sub

from .config import get_settings
from .errors import (
    BadArgument,
    ContextMismatch,
    DivisionByZero,
    LogOfZero,
    NoIrreducible,
    NotPrime,
    NotPrimitive,
    TooLarge,
)

logger = logging.getLogger(__name__)

IndexLike = Union[int, np.ndarray]


# Polynomial helpers. sympy's galoistools wants big-endian coefficient lists.

def encode(coeffs: Sequence[int], p: int) -> int:
    """Pack a little-endian coefficient vector into an element index."""
    index = 0
    for c in reversed(list(coeffs)):
        index = index * p + (int(c) % p)
    return index


def decode(index: int, p: int, e: int) -> List[int]:
    """Unpack an element index into its little-endian coefficient vector of length e."""
    coeffs = []
    for _ in range(e):
        index, c = divmod(index, p)
        coeffs.append(c)
    return coeffs


def _to_gf(coeffs_le: Sequence[int]) -> List[int]:
    big = [int(c) for c in reversed(list(coeffs_le))]
    while big and big[0] == 0:
        big.pop(0)
    return big


def _from_gf(poly: Sequence[int], e: int) -> List[int]:
    coeffs = [int(c) for c in reversed(list(poly))]
    return coeffs + [0] * (e - len(coeffs))


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """
    Irreducibility test for a monic little-endian polynomial m of degree e:
    gcd(x^(p^k) - x, m) = 1 for 1 <= k < e and x^(p^e) = x mod m.
    """
    e = len(modulus) - 1
    m = _to_gf(modulus)
    x = gf_rem([1, 0], m, p, ZZ)
    xp = [1, 0]
    for _ in range(1, e):
        xp = gf_pow_mod(xp, p, m, p, ZZ)
        if gf_gcd(gf_sub(xp, x, p, ZZ), m, p, ZZ) != [1]:
            return False
    xp = gf_pow_mod(xp, p, m, p, ZZ)
    return not gf_sub(xp, x, p, ZZ)


def _candidate_moduli(p: int, e: int) -> Iterator[List[int]]:
    # monic x^e + c_{e-1} x^{e-1} + ... + c_0, lower part in increasing packed order
    for code in range(p ** e):
        yield decode(code, p, e) + [1]


def find_modulus(p: int, e: int) -> List[int]:
    """First irreducible monic polynomial of degree e over F_p in search order."""
    for candidate in _candidate_moduli(p, e):
        if is_irreducible(candidate, p):
            return candidate
    raise NoIrreducible(
        f"no irreducible polynomial of degree {e} over F_{p} found",
        hypothesis="an irreducible polynomial exists for every degree",
    )


@dataclass(frozen=True, eq=False)
class FieldContext:
    """
    A fully constructed F_q, q = p^e.

    dlog_table[0] holds the sentinel -1; the discrete log is undefined there.
    Contexts compare by identity: elements of two separately built contexts never mix.
    """
    p: int
    e: int
    q: int
    modulus: Tuple[int, ...]
    generator_index: int
    dlog_table: np.ndarray
    exp_table: np.ndarray
    trace_table: np.ndarray
    prime_factors: Tuple[int, ...]

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, e={self.e}, modulus={list(self.modulus)}, generator={self.generator_index})"

    # element construction

    def element(self, index: int) -> "FieldElement":
        index = int(index)
        if not 0 <= index < self.q:
            raise BadArgument(f"index {index} outside [0, {self.q})", hypothesis="0 <= index < q")
        return FieldElement(index, self)

    def from_int(self, n: int) -> "FieldElement":
        """Image of the integer n in the prime subfield."""
        return FieldElement(int(n) % self.p, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    @property
    def generator(self) -> "FieldElement":
        return FieldElement(self.generator_index, self)

    def elements(self) -> Iterator["FieldElement"]:
        for index in range(self.q):
            yield FieldElement(index, self)

    def indices(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # vectorised index arithmetic

    @property
    def _powers(self) -> np.ndarray:
        return self.p ** np.arange(self.e, dtype=np.int64)

    def _digits(self, x: IndexLike) -> np.ndarray:
        return (np.asarray(x, dtype=np.int64)[..., None] // self._powers) % self.p

    def _pack(self, digits: np.ndarray) -> np.ndarray:
        return (digits % self.p) @ self._powers

    def add_idx(self, x: IndexLike, y: IndexLike) -> IndexLike:
        return _like(x, y, self._pack(self._digits(x) + self._digits(y)))

    def neg_idx(self, x: IndexLike) -> IndexLike:
        return _like(x, x, self._pack(-self._digits(x)))

    def sub_idx(self, x: IndexLike, y: IndexLike) -> IndexLike:
        return _like(x, y, self._pack(self._digits(x) - self._digits(y)))

    def mul_idx(self, x: IndexLike, y: IndexLike) -> IndexLike:
        xa = np.asarray(x, dtype=np.int64)
        ya = np.asarray(y, dtype=np.int64)
        k = (self.dlog_table[xa] + self.dlog_table[ya]) % (self.q - 1)
        out = np.where((xa == 0) | (ya == 0), 0, self.exp_table[k])
        return _like(x, y, out)

    def inv_idx(self, x: IndexLike) -> IndexLike:
        xa = np.asarray(x, dtype=np.int64)
        if np.any(xa == 0):
            raise DivisionByZero("inverse of zero", hypothesis="x != 0")
        return _like(x, x, self.exp_table[(-self.dlog_table[xa]) % (self.q - 1)])

    def pow_idx(self, x: IndexLike, n: int) -> IndexLike:
        xa = np.asarray(x, dtype=np.int64)
        if n < 0 and np.any(xa == 0):
            raise DivisionByZero("negative power of zero", hypothesis="x != 0")
        k = (self.dlog_table[xa] * (n % (self.q - 1))) % (self.q - 1)
        zero_value = 1 if n == 0 else 0
        return _like(x, x, np.where(xa == 0, zero_value, self.exp_table[k]))

    def dlog_idx(self, x: IndexLike) -> IndexLike:
        xa = np.asarray(x, dtype=np.int64)
        if np.any(xa == 0):
            raise LogOfZero("discrete log of zero", hypothesis="x != 0")
        return _like(x, x, self.dlog_table[xa])

    def is_square_idx(self, x: IndexLike) -> IndexLike:
        """Quadratic residuosity by dlog parity; 0 counts as a square."""
        xa = np.asarray(x, dtype=np.int64)
        out = (xa == 0) | (self.dlog_table[xa] % 2 == 0)
        return bool(out) if np.ndim(out) == 0 else out


def _like(x: IndexLike, y: IndexLike, out: np.ndarray) -> IndexLike:
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return int(out)
    return out


Operand = Union["FieldElement", int]


@dataclass(frozen=True, eq=False)
class FieldElement:
    """An element of F_q, stored as its packed index. Ints are coerced into the prime subfield."""
    index: int
    ctx: FieldContext

    def _coerce(self, other: Operand) -> int:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise ContextMismatch(
                    f"cannot combine elements of {self.ctx!r} and {other.ctx!r}",
                    hypothesis="operands share a field context",
                )
            return other.index
        if isinstance(other, (int, np.integer)):
            return int(other) % self.ctx.p
        return NotImplemented

    def _wrap(self, index: int) -> "FieldElement":
        return FieldElement(int(index), self.ctx)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.index == other.index
        if isinstance(other, (int, np.integer)):
            return self.index == int(other) % self.ctx.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.index, id(self.ctx)))

    def __repr__(self) -> str:
        return f"FieldElement({self.index} in F_{self.ctx.q})"

    def __int__(self) -> int:
        return self.index

    def __bool__(self) -> bool:
        return self.index != 0

    def __add__(self, other: Operand) -> "FieldElement":
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return self._wrap(self.ctx.add_idx(self.index, y))

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "FieldElement":
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return self._wrap(self.ctx.sub_idx(self.index, y))

    def __rsub__(self, other: Operand) -> "FieldElement":
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return self._wrap(self.ctx.sub_idx(y, self.index))

    def __neg__(self) -> "FieldElement":
        return self._wrap(self.ctx.neg_idx(self.index))

    def __mul__(self, other: Operand) -> "FieldElement":
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return self._wrap(self.ctx.mul_idx(self.index, y))

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "FieldElement":
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return self._wrap(self.ctx.mul_idx(self.index, self.ctx.inv_idx(y)))

    def __rtruediv__(self, other: Operand) -> "FieldElement":
        y = self._coerce(other)
        if y is NotImplemented:
            return NotImplemented
        return self._wrap(self.ctx.mul_idx(y, self.ctx.inv_idx(self.index)))

    def __pow__(self, n: int) -> "FieldElement":
        return self._wrap(self.ctx.pow_idx(self.index, int(n)))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.ctx.inv_idx(self.index))

    def dlog(self) -> int:
        return dlog(self.ctx, self)

    def trace(self) -> "FieldElement":
        return trace_to_base(self.ctx, self)

    def is_square(self) -> bool:
        return self.ctx.is_square_idx(self.index)


# Construction

def _poly_of(index: int, p: int, e: int) -> List[int]:
    return _to_gf(decode(index, p, e))


def _power_index(index: int, n: int, modulus: Sequence[int], p: int) -> int:
    e = len(modulus) - 1
    result = gf_pow_mod(_poly_of(index, p, e), n, _to_gf(modulus), p, ZZ)
    return encode(_from_gf(result, e), p)


def _is_primitive(index: int, q: int, factors: Sequence[int], modulus: Sequence[int], p: int) -> bool:
    if index == 0:
        return False
    if _power_index(index, q - 1, modulus, p) != 1:
        return False
    return all(_power_index(index, (q - 1) // ell, modulus, p) != 1 for ell in factors)


def _mul_matrix(index: int, modulus: Sequence[int], p: int) -> np.ndarray:
    """Matrix over F_p of multiplication by the element `index`; column i is index * x^i."""
    e = len(modulus) - 1
    m = _to_gf(modulus)
    h = _poly_of(index, p, e)
    cols = []
    for i in range(e):
        prod = gf_rem(gf_mul(h, [1] + [0] * i, p, ZZ), m, p, ZZ)
        cols.append(_from_gf(prod, e))
    return np.array(cols, dtype=np.int64).T


def _exp_table(generator: int, q: int, modulus: Sequence[int], p: int) -> np.ndarray:
    # doubling: rows for g^0..g^{n-1} times the matrix of g^n give g^n..g^{2n-1}
    e = len(modulus) - 1
    digits = np.zeros((1, e), dtype=np.int64)
    digits[0, 0] = 1
    while len(digits) < q - 1:
        step = _mul_matrix(_power_index(generator, len(digits), modulus, p), modulus, p)
        digits = np.vstack([digits, (digits @ step.T) % p])
    return (digits[: q - 1] @ (p ** np.arange(e, dtype=np.int64))).astype(np.int64)


def _trace_table(ctx_parts: dict) -> np.ndarray:
    p, e, q = ctx_parts["p"], ctx_parts["e"], ctx_parts["q"]
    exp_table = ctx_parts["exp_table"]
    powers = p ** np.arange(e, dtype=np.int64)
    k = np.arange(q - 1, dtype=np.int64)
    acc = np.zeros((q - 1, e), dtype=np.int64)
    frob = 1
    for _ in range(e):
        conj = exp_table[(k * frob) % (q - 1)]
        acc = (acc + (conj[:, None] // powers) % p) % p
        frob = (frob * p) % (q - 1) if q > 2 else 1
    table = np.zeros(q, dtype=np.int64)
    table[exp_table] = acc @ powers
    return table


def build_field(p: int, e: int = 1, generator: Optional[int] = None, max_q: Optional[int] = None) -> FieldContext:
    """
    Construct F_{p^e}.

    Args:
        p: characteristic, must be prime
        e: extension degree >= 1
        generator: optional index of the multiplicative generator to use; by
            default the smallest primitive index is chosen
        max_q: field-size ceiling, defaults to the configured FROBTRACE_MAX_Q

    Returns:
        An immutable FieldContext. Results are cached per argument tuple.
    """
    ceiling = get_settings().max_q if max_q is None else max_q
    return _build_field(int(p), int(e), None if generator is None else int(generator), int(ceiling))


@lru_cache(maxsize=64)
def _build_field(p: int, e: int, generator: Optional[int], max_q: int) -> FieldContext:
    if not isprime(p):
        raise NotPrime(f"p = {p} is not prime", hypothesis="p is prime")
    if e < 1:
        raise BadArgument(f"extension degree e = {e} must be >= 1", hypothesis="e >= 1")
    q = p ** e
    if q > max_q:
        raise TooLarge(f"q = {p}^{e} = {q} exceeds the maximum {max_q}", hypothesis=f"q <= {max_q}")

    modulus = find_modulus(p, e)
    factors = tuple(sorted(factorint(q - 1))) if q > 2 else ()

    if generator is None:
        generator = next(
            (c for c in range(1, q) if _is_primitive(c, q, factors, modulus, p)),
            None,
        )
        if generator is None:
            raise NotPrimitive(f"no generator found for F_{q}", hypothesis="F_q* is cyclic")
    elif not 0 < generator < q or not _is_primitive(generator, q, factors, modulus, p):
        raise NotPrimitive(
            f"element {generator} does not generate F_{q}*",
            hypothesis="generator has multiplicative order q - 1",
        )

    exp_table = _exp_table(generator, q, modulus, p)
    dlog_table = np.full(q, -1, dtype=np.int64)
    dlog_table[exp_table] = np.arange(q - 1, dtype=np.int64)
    if np.count_nonzero(dlog_table >= 0) != q - 1 or dlog_table[0] != -1:
        raise NotPrimitive(f"powers of {generator} do not cover F_{q}*", hypothesis="generator is primitive")

    trace_table = _trace_table({"p": p, "e": e, "q": q, "exp_table": exp_table})
    if np.any(trace_table >= p):
        raise NoIrreducible(f"trace map left the prime subfield for modulus {modulus}",
                            hypothesis="modulus is irreducible")

    for table in (exp_table, dlog_table, trace_table):
        table.setflags(write=False)

    logger.debug("built F_%d (p=%d, e=%d) modulus=%s generator=%d", q, p, e, modulus, generator)
    return FieldContext(
        p=p,
        e=e,
        q=q,
        modulus=tuple(modulus),
        generator_index=generator,
        dlog_table=dlog_table,
        exp_table=exp_table,
        trace_table=trace_table,
        prime_factors=factors,
    )


# Module-level operations

def dlog(ctx: FieldContext, x: FieldElement) -> int:
    """k in [0, q-2] with g^k = x."""
    _require_ctx(ctx, x)
    if x.index == 0:
        raise LogOfZero("discrete log of zero", hypothesis="x != 0")
    return int(ctx.dlog_table[x.index])


def trace_to_base(ctx: FieldContext, x: FieldElement) -> FieldElement:
    """x + x^p + ... + x^(p^(e-1)), an element of the prime subfield."""
    _require_ctx(ctx, x)
    return FieldElement(int(ctx.trace_table[x.index]), ctx)


def embed_base(ctx: FieldContext, value: Union[int, FieldElement]) -> FieldElement:
    """Image in F_q of an integer or of an element of the prime field F_p."""
    if isinstance(value, FieldElement):
        if value.ctx.p != ctx.p or value.index >= ctx.p:
            raise ContextMismatch(
                f"{value!r} is not an element of the prime field F_{ctx.p}",
                hypothesis="embedded value lies in F_p",
            )
        return FieldElement(value.index, ctx)
    return ctx.from_int(value)


def primitive_elements(ctx: FieldContext) -> List[FieldElement]:
    """All generators of F_q*, i.e. g^k with gcd(k, q-1) = 1, in increasing index order."""
    k = np.arange(ctx.q - 1, dtype=np.int64)
    coprime = np.gcd(k, ctx.q - 1) == 1
    return [FieldElement(int(i), ctx) for i in sorted(ctx.exp_table[coprime])]


def random_element(ctx: FieldContext, rng: np.random.Generator, nonzero: bool = False) -> FieldElement:
    low = 1 if nonzero else 0
    return FieldElement(int(rng.integers(low, ctx.q)), ctx)


def _require_ctx(ctx: FieldContext, x: FieldElement) -> None:
    if x.ctx is not ctx:
        raise ContextMismatch(f"{x!r} does not belong to {ctx!r}", hypothesis="operands share a field context")
