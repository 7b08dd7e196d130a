"""Exact binary-expansion arithmetic.

Coordinates on the Chamanara square are either exact rationals
(:class:`fractions.Fraction`) or infinite binary expansions with a finite
description (:class:`DigitStream`).  The expansions that matter most are
built from a :class:`SparseExponentSequence` ``s_1 < s_2 < ...`` whose
increments diverge::

    y = sum_n 2**-s_n          (SparseSum)
    x = 1 - sum_n 2**-s_n      (SparseComplement)

Digits are indexed from 1: ``z = sum_i z_i 2**-i``.
"""

from __future__ import annotations

import bisect
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Callable, Iterable, Optional, Sequence, Union


# ---------------------------------------------------------------------------
# Dyadic rationals
# ---------------------------------------------------------------------------

def is_dyadic(q: Rational) -> bool:
    """Whether ``q`` is of the form ``m / 2**e``."""
    d = q.denominator
    return d & (d - 1) == 0


def dyadic_exponent(q: Rational) -> int:
    """Return ``e`` with ``q.denominator == 2**e``; raise if ``q`` is not dyadic."""
    if not is_dyadic(q):
        raise ValueError(f"{q} is not a dyadic rational")
    return q.denominator.bit_length() - 1


@total_ordering
@dataclass(frozen=True, eq=False)
class DyadicRational:
    """The number ``numerator / 2**exponent`` kept in canonical form.

    Canonical means the numerator is odd or the exponent is zero.  Equality
    and hashing agree with :class:`~fractions.Fraction` and ``int``.

    >>> DyadicRational(6, 3)
    DyadicRational(3, 2)
    >>> DyadicRational(1, 2) == Fraction(1, 4)
    True
    """

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")
        n, e = self.numerator, self.exponent
        if n == 0:
            e = 0
        else:
            tz = (n & -n).bit_length() - 1
            shift = min(tz, e)
            n >>= shift
            e -= shift
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", e)

    @classmethod
    def from_fraction(cls, q) -> "DyadicRational":
        if isinstance(q, DyadicRational):
            return q
        q = Fraction(q)
        return cls(q.numerator, dyadic_exponent(q))

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    @property
    def denominator(self) -> int:
        return 1 << self.exponent

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return f"DyadicRational({self.numerator}, {self.exponent})"

    def __str__(self) -> str:
        return str(self.value)

    def __hash__(self) -> int:
        return hash(self.value)

    def __eq__(self, other) -> bool:
        if isinstance(other, DyadicRational):
            return self.numerator == other.numerator and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, DyadicRational):
            return self.value < other.value
        if isinstance(other, (int, Fraction, float)):
            return self.value < other
        return NotImplemented

    def _lift(self, other, op):
        if isinstance(other, DyadicRational):
            return DyadicRational.from_fraction(op(self.value, other.value))
        if isinstance(other, int):
            return DyadicRational.from_fraction(op(self.value, other))
        if isinstance(other, Fraction):
            return op(self.value, other)
        return NotImplemented

    def __add__(self, other):
        return self._lift(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._lift(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._lift(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._lift(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.numerator, self.exponent)

    def __abs__(self) -> "DyadicRational":
        return DyadicRational(abs(self.numerator), self.exponent)


Number = Union[int, Fraction, DyadicRational]


def as_fraction(q: Number) -> Fraction:
    if isinstance(q, DyadicRational):
        return q.value
    if isinstance(q, (int, Fraction)):
        return Fraction(q)
    raise TypeError(f"expected an exact rational, got {type(q).__name__}")


def rational_to_json(q) -> Union[dict, str]:
    """Serialize an exact rational as ``{num, den_exp}`` (dyadic) or ``{num, den}``.

    Positive infinity, used as a sentinel for empty minima, becomes ``"inf"``.
    """
    if q == float("inf"):
        return "inf"
    q = as_fraction(q)
    if is_dyadic(q):
        return {"num": q.numerator, "den_exp": dyadic_exponent(q)}
    return {"num": q.numerator, "den": q.denominator}


def rational_from_json(obj) -> Union[Fraction, float]:
    if obj == "inf":
        return float("inf")
    if "den_exp" in obj:
        return Fraction(obj["num"], 1 << obj["den_exp"])
    return Fraction(obj["num"], obj["den"])


# ---------------------------------------------------------------------------
# Sparse exponent sequences
# ---------------------------------------------------------------------------

class SparseExponentSequence:
    """A strictly increasing sequence of positive integers ``s_1 < s_2 < ...``.

    ``term(n)`` produces ``s_n`` (``n >= 1``) and ``witness(M)`` returns an
    index ``N`` such that ``s_{n+1} - s_n >= M`` for every ``n >= N``.  The
    witness is a claim made by whoever builds the sequence; it is spot
    checked by :func:`verify_divergence`, never proved.

    Terms are memoized; strict monotonicity and positivity are enforced as
    terms are generated.
    """

    def __init__(self, term: Callable[[int], int], witness: Callable[[int], int],
                 name: str = "custom", spec: Optional[dict] = None):
        self._term = term
        self._witness = witness
        self.name = name
        self.spec = spec
        self._terms: list[int] = []
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"SparseExponentSequence({self.name})"

    def _extend_to_count(self, count: int) -> None:
        with self._lock:
            terms = self._terms
            while len(terms) < count:
                n = len(terms) + 1
                s = int(self._term(n))
                if n == 1 and s < 1:
                    raise ValueError(f"{self.name}: s_1 = {s} is not a positive integer")
                if terms and s <= terms[-1]:
                    raise ValueError(f"{self.name}: not strictly increasing at n={n}")
                terms.append(s)

    def _extend_to_value(self, value: int) -> None:
        while not self._terms or self._terms[-1] < value:
            self._extend_to_count(max(1, 2 * len(self._terms)))

    def __getitem__(self, n: int) -> int:
        """Return ``s_n`` (1-indexed)."""
        if n < 1:
            raise IndexError("sequence indices start at 1")
        if n > len(self._terms):
            self._extend_to_count(n)
        return self._terms[n - 1]

    def terms(self, count: int) -> list[int]:
        self._extend_to_count(count)
        return self._terms[:count]

    def terms_up_to(self, bound: int) -> list[int]:
        """All terms ``s_n <= bound``."""
        self._extend_to_value(bound)
        return self._terms[:bisect.bisect_right(self._terms, bound)]

    def __contains__(self, i: int) -> bool:
        self._extend_to_value(i)
        k = bisect.bisect_left(self._terms, i)
        return self._terms[k] == i

    def count_in(self, lo: int, hi: int) -> int:
        """Number of terms in the closed range ``[lo, hi]``."""
        if hi < lo:
            return 0
        self._extend_to_value(hi)
        return bisect.bisect_right(self._terms, hi) - bisect.bisect_left(self._terms, lo)

    def witness(self, M: int) -> int:
        return max(1, int(self._witness(M)))


@dataclass(frozen=True)
class DivergenceCheck:
    """Outcome of :func:`verify_divergence`; truthy iff the check passed."""

    ok: bool
    M: int
    start: int
    horizon: int
    violating_index: Optional[int] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_divergence(seq: SparseExponentSequence, M: int, horizon: int,
                      start: Optional[int] = None) -> DivergenceCheck:
    """Check ``s_{n+1} - s_n >= M`` for every ``n`` in ``[N(M), horizon]``.

    ``start`` overrides the witness ``N(M)``.  On failure the first violating
    index ``n`` is reported.
    """
    N = seq.witness(M) if start is None else start
    if horizon < N:
        raise ValueError(f"horizon {horizon} is below the witness index {N}")
    terms = seq.terms(horizon + 1)
    for n in range(N, horizon + 1):
        if terms[n] - terms[n - 1] < M:
            return DivergenceCheck(False, M, N, horizon, n)
    return DivergenceCheck(True, M, N, horizon)


def _poly_eval(coeffs: Sequence[int], n: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def _poly_increment(coeffs: Sequence[int]) -> list[int]:
    """Coefficients of ``p(n+1) - p(n)``."""
    deg = len(coeffs) - 1
    out = [0] * deg
    # (n+1)^i - n^i = sum_{j<i} C(i, j) n^j
    from math import comb
    for i in range(1, deg + 1):
        for j in range(i):
            out[j] += coeffs[i] * comb(i, j)
    return out


def polynomial_sequence(coefficients: Sequence[int]) -> SparseExponentSequence:
    """``s_n = c_0 + c_1 n + c_2 n^2 + ...`` for a polynomial of degree >= 2.

    Lower degrees have bounded increments and no divergence witness exists.
    """
    coeffs = [int(c) for c in coefficients]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 3:
        raise ValueError("polynomial sequences need degree >= 2 for increments to diverge")
    if coeffs[-1] <= 0:
        raise ValueError("leading coefficient must be positive")
    inc = _poly_increment(coeffs)

    def witness(M: int) -> int:
        # Past the Cauchy root bound of inc(n) - M the increments stay >= M.
        shifted = list(inc)
        shifted[0] -= M
        lead = shifted[-1]
        bound = 1 + max(abs(Fraction(c, lead)) for c in shifted[:-1])
        N = max(1, int(bound) + 1)
        while N > 1 and _poly_eval(inc, N - 1) >= M:
            N -= 1
        return N

    if witness(1) != 1 or _poly_eval(coeffs, 1) < 1:
        raise ValueError("polynomial does not give a strictly increasing positive sequence")
    name = "polynomial(" + ",".join(map(str, coeffs)) + ")"
    return SparseExponentSequence(lambda n: _poly_eval(coeffs, n), witness, name,
                                  {"kind": "polynomial", "coefficients": coeffs})


def exponential_sequence(base: int = 2, offset: int = -1) -> SparseExponentSequence:
    """``s_n = base**n + offset``; increments ``base**n (base - 1)``."""
    base, offset = int(base), int(offset)
    if base < 2:
        raise ValueError("exponential sequences need base >= 2")
    if base + offset < 1:
        raise ValueError("s_1 = base + offset must be positive")

    def witness(M: int) -> int:
        n = 1
        while base ** n * (base - 1) < M:
            n += 1
        return n

    return SparseExponentSequence(lambda n: base ** n + offset, witness,
                                  f"exponential({base},{offset})",
                                  {"kind": "exponential", "base": base, "offset": offset})


def explicit_sequence(values: Sequence[int], tail: SparseExponentSequence) -> SparseExponentSequence:
    """Explicit leading terms, continued by the terms of ``tail`` that exceed them."""
    values = [int(v) for v in values]
    if not values:
        return tail
    if values[0] < 1 or any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("explicit values must be positive and strictly increasing")
    L = len(values)
    last = values[-1]
    i0 = 1
    while tail[i0] <= last:
        i0 += 1

    def term(n: int) -> int:
        return values[n - 1] if n <= L else tail[i0 + n - L - 1]

    seq = SparseExponentSequence(term, lambda M: 1, "explicit", None)

    def witness(M: int) -> int:
        N = L + max(tail.witness(M), i0) - i0 + 1
        while N > 1 and seq[N] - seq[N - 1] >= M:
            N -= 1
        return N

    seq._witness = witness
    seq.spec = {"kind": "explicit", "values": values, "tail": tail.spec}
    return seq


# ---------------------------------------------------------------------------
# Digit streams
# ---------------------------------------------------------------------------

class DigitStream:
    """An infinite binary expansion ``[z_1, z_2, ...]`` with a finite description.

    Digits are memoized in a per-stream cache guarded by a lock, so
    concurrent readers see identical results.

    ``eventually_constant`` is ``True`` when the expansion ends in a constant
    tail, ``False`` when it provably does not and ``None`` when unknown.
    ``aperiodic`` is ``True`` when the expansion is provably not eventually
    periodic.
    """

    eventually_constant: Optional[bool] = None
    aperiodic: bool = False

    def __init__(self):
        self._cache = bytearray()
        self._lock = threading.Lock()

    def _digit(self, i: int) -> int:
        raise NotImplementedError

    def _fill(self, cache: bytearray, upto: int) -> None:
        for i in range(len(cache) + 1, upto + 1):
            cache.append(self._digit(i))

    def digit_at(self, i: int) -> int:
        if i < 1:
            raise ValueError("digit positions start at 1")
        cache = self._cache
        if i > len(cache):
            with self._lock:
                if i > len(cache):
                    self._fill(cache, i)
        return cache[i - 1]

    def digits(self, m: int) -> bytes:
        """The first ``m`` digits."""
        if m <= 0:
            return b""
        self.digit_at(m)
        return bytes(self._cache[:m])

    def digit_string(self, m: int) -> str:
        return "".join("1" if d else "0" for d in self.digits(m))

    def approx(self, m: int) -> DyadicRational:
        return DyadicRational(int(self.digit_string(m), 2) if m else 0, m)

    @property
    def exact_value(self) -> Optional[Fraction]:
        return None

    def bounds(self, m: int) -> tuple[Fraction, Fraction]:
        """A closed interval of width at most ``2**-m`` containing the value."""
        v = self.exact_value
        if v is not None:
            return v, v
        lo = self.approx(m).value
        return lo, lo + Fraction(1, 1 << m)

    def canonical(self) -> tuple["DigitStream", bytes, int]:
        """``(base, prefix, offset)`` with ``self == PrefixThen(prefix, ShiftOf(base, offset))``.

        The prefix is made as short as possible, which makes the triple unique
        among descriptions over an aperiodic base.
        """
        return self, b"", 0


def _reduce(base: DigitStream, prefix: bytes, offset: int) -> tuple[DigitStream, bytes, int]:
    while prefix and offset > 0 and prefix[-1] == base.digit_at(offset):
        prefix = prefix[:-1]
        offset -= 1
    return base, prefix, offset


class Terminating(DigitStream):
    """The finite expansion of a dyadic rational in ``[0, 1)``, padded with zeros."""

    eventually_constant = True

    def __init__(self, value: Number):
        super().__init__()
        value = DyadicRational.from_fraction(value)
        if not 0 <= value < 1:
            raise ValueError("terminating streams represent values in [0, 1)")
        self.value = value

    def __repr__(self) -> str:
        return f"Terminating({self.value})"

    def _digit(self, i: int) -> int:
        e = self.value.exponent
        return (self.value.numerator >> (e - i)) & 1 if i <= e else 0

    @property
    def exact_value(self) -> Fraction:
        return self.value.value


class RationalStream(DigitStream):
    """Expansion of a non-dyadic rational in ``(0, 1)`` (eventually periodic)."""

    eventually_constant = False

    def __init__(self, value: Number):
        super().__init__()
        value = as_fraction(value)
        if not 0 < value < 1 or is_dyadic(value):
            raise ValueError("rational streams represent non-dyadic values in (0, 1)")
        self.value = value
        self._rem = value.numerator

    def __repr__(self) -> str:
        return f"RationalStream({self.value})"

    def _fill(self, cache: bytearray, upto: int) -> None:
        d = self.value.denominator
        r = self._rem
        for _ in range(len(cache), upto):
            r <<= 1
            if r >= d:
                cache.append(1)
                r -= d
            else:
                cache.append(0)
        self._rem = r

    @property
    def exact_value(self) -> Fraction:
        return self.value

    def preperiod_and_period(self) -> tuple[int, int]:
        d = self.value.denominator
        pre = (d & -d).bit_length() - 1
        odd = d >> pre
        per, r = 1, 2 % odd
        while r != 1:
            r = (r * 2) % odd
            per += 1
        return pre, per


class SparseSum(DigitStream):
    """``sum_n 2**-s_n``: digit ``i`` is 1 iff ``i`` is a term of the sequence."""

    eventually_constant = False
    aperiodic = True

    def __init__(self, seq: SparseExponentSequence):
        super().__init__()
        self.seq = seq

    def __repr__(self) -> str:
        return f"SparseSum({self.seq.name})"

    def _fill(self, cache: bytearray, upto: int) -> None:
        start = len(cache)
        block = bytearray(upto - start)
        for s in self.seq.terms_up_to(upto):
            if s > start:
                block[s - start - 1] = 1
        cache.extend(block)


class SparseComplement(DigitStream):
    """``1 - sum_n 2**-s_n``.  The sum is non-dyadic, so digits are ``1 - y_i``."""

    eventually_constant = False
    aperiodic = True

    def __init__(self, seq: SparseExponentSequence):
        super().__init__()
        self.seq = seq

    def __repr__(self) -> str:
        return f"SparseComplement({self.seq.name})"

    def _fill(self, cache: bytearray, upto: int) -> None:
        start = len(cache)
        block = bytearray(b"\x01" * (upto - start))
        for s in self.seq.terms_up_to(upto):
            if s > start:
                block[s - start - 1] = 0
        cache.extend(block)


class PrefixThen(DigitStream):
    """Finitely many explicit digits followed by another stream."""

    def __init__(self, prefix: Iterable[int], tail: DigitStream):
        super().__init__()
        self.prefix = bytes(prefix)
        if any(b > 1 for b in self.prefix):
            raise ValueError("digits must be 0 or 1")
        self.tail = tail
        self.eventually_constant = tail.eventually_constant
        self.aperiodic = tail.aperiodic

    def __repr__(self) -> str:
        bits = "".join(map(str, self.prefix))
        return f"PrefixThen([{bits}], {self.tail!r})"

    def _digit(self, i: int) -> int:
        p = self.prefix
        return p[i - 1] if i <= len(p) else self.tail.digit_at(i - len(p))

    @property
    def exact_value(self) -> Optional[Fraction]:
        v = self.tail.exact_value
        if v is None:
            return None
        L = len(self.prefix)
        head = Fraction(int("".join(map(str, self.prefix)) or "0", 2), 1 << L)
        return head + v / (1 << L)

    def canonical(self) -> tuple[DigitStream, bytes, int]:
        base, q, o = self.tail.canonical()
        return _reduce(base, self.prefix + q, o)


class ShiftOf(DigitStream):
    """``[z_{k+1}, z_{k+2}, ...]`` for a stream ``z`` and offset ``k >= 0``."""

    def __init__(self, base: DigitStream, offset: int):
        super().__init__()
        if offset < 0:
            raise ValueError("shift offsets are nonnegative")
        self.base = base
        self.offset = offset
        self.eventually_constant = base.eventually_constant
        self.aperiodic = base.aperiodic

    def __repr__(self) -> str:
        return f"ShiftOf({self.base!r}, {self.offset})"

    def _fill(self, cache: bytearray, upto: int) -> None:
        k = self.offset
        cache.extend(self.base.digits(upto + k)[len(cache) + k:])

    @property
    def exact_value(self) -> Optional[Fraction]:
        v = self.base.exact_value
        if v is None:
            return None
        w = v * (1 << self.offset)
        return w - (w.numerator // w.denominator)

    def canonical(self) -> tuple[DigitStream, bytes, int]:
        base, q, o = self.base.canonical()
        k = self.offset
        if k <= len(q):
            return _reduce(base, q[k:], o)
        return base, b"", o + k - len(q)


# Factories that flatten nested wrappers; the digits are unchanged.

def prefix_then(prefix: Iterable[int], tail: DigitStream) -> DigitStream:
    prefix = bytes(prefix)
    if not prefix:
        return tail
    if isinstance(tail, PrefixThen):
        return PrefixThen(prefix + tail.prefix, tail.tail)
    return PrefixThen(prefix, tail)


def shift_of(stream: DigitStream, offset: int) -> DigitStream:
    if offset < 0:
        raise ValueError("shift offsets are nonnegative")
    while offset:
        if isinstance(stream, ShiftOf):
            return ShiftOf(stream.base, stream.offset + offset)
        if isinstance(stream, PrefixThen):
            L = len(stream.prefix)
            if offset < L:
                return PrefixThen(stream.prefix[offset:], stream.tail)
            stream, offset = stream.tail, offset - L
            continue
        return ShiftOf(stream, offset)
    return stream


def sparse_sum_digits(seq: SparseExponentSequence) -> DigitStream:
    return SparseSum(seq)


def sparse_complement_digits(seq: SparseExponentSequence) -> DigitStream:
    """The stream of ``1 - sum_n 2**-s_n``; digit ``i`` is ``1 - [i in seq]``."""
    return SparseComplement(seq)


def digit_at(s: DigitStream, i: int) -> int:
    return s.digit_at(i)


def to_dyadic_approx(s: DigitStream, m: int) -> DyadicRational:
    """Truncation ``sum_{i<=m} z_i 2**-i``; the true value lies in ``[approx, approx + 2**-m]``."""
    if m < 1:
        raise ValueError("precision must be at least one digit")
    return s.approx(m)


def stream_of(value) -> DigitStream:
    """Coerce an exact rational in ``[0, 1)`` (or a stream) to a :class:`DigitStream`."""
    if isinstance(value, DigitStream):
        return value
    q = as_fraction(value)
    return Terminating(q) if is_dyadic(q) else RationalStream(q)


# ---------------------------------------------------------------------------
# Comparison
# ---------------------------------------------------------------------------

def compare_to_dyadic(s: DigitStream, q: Number) -> int:
    """Exact sign of ``value(s) - q`` for a dyadic ``q``.

    Requires that ``s`` has a known exact value or is known not to end in a
    constant tail; then scanning to the last digit of ``q`` decides.
    """
    q = as_fraction(q)
    v = s.exact_value
    if v is not None:
        return (v > q) - (v < q)
    if s.eventually_constant is not False:
        raise ValueError("comparison undecidable for a stream that may end in a constant tail")
    e = dyadic_exponent(q)
    if q <= 0:
        return 1
    if q >= 1:
        return -1
    lo = s.approx(max(e, 1)).value
    # value lies strictly inside (lo, lo + 2**-e) and q is a multiple of 2**-e
    return 1 if q <= lo else -1


def same_stream(a: DigitStream, b: DigitStream, budget: int = 256) -> Optional[bool]:
    """Decide whether two streams describe the same expansion.

    Identical canonical descriptions give ``True``; distinct reduced
    descriptions over one aperiodic base give ``False``; a digit mismatch
    within ``budget`` gives ``False``.  Otherwise ``None`` (undecided).
    """
    ca, cb = a.canonical(), b.canonical()
    if ca[0] is cb[0] and ca[1:] == cb[1:]:
        return True
    if ca[0] is cb[0] and ca[0].aperiodic:
        return False
    va, vb = a.exact_value, b.exact_value
    if va is not None and vb is not None:
        return va == vb
    if a.digits(budget) != b.digits(budget):
        return False
    return None


def compare_streams(a: DigitStream, b: DigitStream, budget: int = 256) -> Optional[int]:
    """Sign of ``value(a) - value(b)`` or ``None`` when undecided within ``budget`` digits."""
    if same_stream(a, b, budget):
        return 0
    da, db = a.digits(budget), b.digits(budget)
    for i, (u, v) in enumerate(zip(da, db), start=1):
        if u != v:
            if a.eventually_constant is False and b.eventually_constant is False:
                return 1 if u > v else -1
            lo_a, hi_a = a.bounds(budget)
            lo_b, hi_b = b.bounds(budget)
            if lo_a > hi_b:
                return 1
            if hi_a < lo_b:
                return -1
            return None
    return None
