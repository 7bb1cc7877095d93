"""Exact arithmetic in realizations of the completed Grothendieck ring.

A class is a finite Laurent polynomial in the Lefschetz class ``L`` (or,
in the Hodge-Deligne realization, in the E-polynomial variables ``u`` and
``v`` with ``L = uv``) together with a precision ``N``.  A class at
precision ``N`` only remembers monomials of weight ``> -N``; everything at
or below the cutoff is the image of the ``N``-fold twist filtration and is
quotiented away.  The weight of ``u^a v^b`` is ``max(a, b)`` and the weight
of ``L^k`` in the counting realization is ``k``.

Twist convention: the Tate twist ``(1)[2]`` acts as multiplication by
``L^-1``, so the motive of a smooth ``d``-dimensional ``X`` realizes to
``[X] * L^-d``.

Examples
--------
>>> L = lefschetz(HODGE)
>>> print((L - 1) * (L + 1))
L^2 - 1
>>> print(expand_rational(RationalClass((L - 1) * L, 0, (2,)), HODGE, 3))
1 - L^-1 + L^-2
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import InputError, NonPolynomialClass, NonTateClass, PrecisionTooSmall, RealizationMismatch

__all__ = [
    "Realization",
    "HODGE",
    "counting",
    "CompletedClass",
    "RationalClass",
    "lefschetz",
    "one",
    "zero",
    "tate",
    "hodge_u",
    "hodge_v",
    "ring_arith",
    "expand_rational",
    "vdim",
    "truncate",
    "realize_count",
    "eq_class",
    "class_to_json",
    "class_from_json",
    "rational_to_json",
]

MAX_Q = 65521

Key = tuple  # (a, b) in Hodge mode, (k,) in counting mode


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % p for p in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class Realization:
    """Which measure a class lives in: Hodge-Deligne or F_q point counting."""

    tag: str
    q: int | None = None

    def __post_init__(self):
        if self.tag == "hodge":
            if self.q is not None:
                raise ValueError("the Hodge-Deligne realization takes no q")
        elif self.tag == "count":
            if not isinstance(self.q, int) or not (2 <= self.q <= MAX_Q and _is_prime(self.q)):
                raise ValueError(f"q must be a prime in [2, {MAX_Q}], got {self.q!r}")
        else:
            raise ValueError(f"unknown realization tag {self.tag!r}")

    @property
    def arity(self) -> int:
        return 2 if self.tag == "hodge" else 1

    def lefschetz_key(self, k: int = 1) -> Key:
        return (k, k) if self.tag == "hodge" else (k,)

    def __str__(self):
        return "hodge" if self.tag == "hodge" else f"count(q={self.q})"


HODGE = Realization("hodge")


def counting(q: int) -> Realization:
    return Realization("count", q)


def _weight(key: Key) -> int:
    return max(key)


def _min_precision(p1: int | None, p2: int | None) -> int | None:
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    return min(p1, p2)


def _lifted(precision: int | None, other: "CompletedClass") -> int | None:
    if precision is None or other.is_exact and other.is_zero():
        return None
    lift = max(other.weight() or 0, 0)
    if precision - lift < 1:
        raise PrecisionTooSmall(f"a factor of weight {lift} swamps precision {precision}")
    return precision - lift


Scalar = Union[int, "CompletedClass"]


@dataclass(frozen=True)
class CompletedClass:
    """A realized class with finite precision.

    ``terms`` may be given as any mapping from exponent keys to integer
    coefficients; it is canonicalized on construction (zero coefficients and
    sub-cutoff monomials dropped, keys sorted).  ``precision=None`` means
    exact.
    """

    realization: Realization
    terms: tuple = ()
    precision: int | None = None

    def __post_init__(self):
        if self.precision is not None and (not isinstance(self.precision, int) or self.precision < 1):
            raise ValueError(f"precision must be an integer >= 1 or None, got {self.precision!r}")
        items = self.terms.items() if isinstance(self.terms, Mapping) else self.terms
        arity = self.realization.arity
        acc: dict[Key, int] = defaultdict(int)
        for key, coeff in items:
            key = tuple(int(e) for e in key)
            if len(key) != arity:
                raise ValueError(f"monomial {key} does not match realization {self.realization}")
            if not isinstance(coeff, int):
                raise TypeError(f"coefficients must be integers, got {coeff!r}")
            acc[key] += coeff
        cutoff = self.precision
        canon = tuple(
            sorted(
                (k, c)
                for k, c in acc.items()
                if c != 0 and (cutoff is None or _weight(k) > -cutoff)
            )
        )
        object.__setattr__(self, "terms", canon)

    # -- basic views ------------------------------------------------------

    @property
    def monomials(self) -> dict:
        return dict(self.terms)

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def weight(self) -> int | None:
        """Largest monomial weight, or None for the zero class."""
        if not self.terms:
            return None
        return max(_weight(k) for k, _ in self.terms)

    def top_weight(self) -> int | None:
        """Largest total degree ``a + b`` (``2k`` in counting mode)."""
        if not self.terms:
            return None
        if self.realization.arity == 2:
            return max(a + b for (a, b), _ in self.terms)
        return max(2 * k for (k,), _ in self.terms)

    def is_tate(self) -> bool:
        return self.realization.arity == 1 or all(a == b for (a, b), _ in self.terms)

    def tate_coefficients(self) -> dict[int, int]:
        """Map ``k -> c_k`` for a pure-L class; raises NonTateClass otherwise."""
        if not self.is_tate():
            bad = next(k for k, _ in self.terms if k[0] != k[1])
            raise NonTateClass(f"monomial u^{bad[0]} v^{bad[1]} is not a power of L")
        return {k[0]: c for k, c in self.terms}

    # -- conversions ------------------------------------------------------

    def with_precision(self, precision: int | None) -> CompletedClass:
        return CompletedClass(self.realization, self.terms, precision)

    def to_realization(self, target: Realization) -> CompletedClass:
        if target == self.realization:
            return self
        if target.tag == "count":
            if self.realization.tag == "count":
                raise RealizationMismatch(f"cannot move a class from {self.realization} to {target}")
            coeffs = self.tate_coefficients()
            return CompletedClass(target, {(k,): c for k, c in coeffs.items()}, self.precision)
        if self.realization.tag == "count":
            raise RealizationMismatch("a point count does not determine a Hodge-Deligne class")
        raise RealizationMismatch(f"cannot move a class from {self.realization} to {target}")

    def shift(self, k: int) -> CompletedClass:
        """Multiply by ``L^k``.  A positive shift costs ``k`` digits of precision."""
        precision = self.precision
        if precision is not None and k > 0:
            precision -= k
            if precision < 1:
                raise PrecisionTooSmall(f"shifting a class mod L^-{self.precision} by L^{k} leaves nothing known")
        return CompletedClass(
            self.realization,
            {tuple(e + k for e in key): c for key, c in self.terms},
            precision,
        )

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> CompletedClass:
        if isinstance(other, CompletedClass):
            if other.realization != self.realization:
                raise RealizationMismatch(f"{self.realization} vs {other.realization}")
            return other
        if isinstance(other, int):
            return CompletedClass(self.realization, {self.realization.lefschetz_key(0): other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = defaultdict(int, self.terms)
        for k, c in other.terms:
            acc[k] += c
        return CompletedClass(self.realization, acc, _min_precision(self.precision, other.precision))

    __radd__ = __add__

    def __neg__(self):
        return CompletedClass(self.realization, {k: -c for k, c in self.terms}, self.precision)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict[Key, int] = defaultdict(int)
        for k1, c1 in self.terms:
            for k2, c2 in other.terms:
                acc[tuple(a + b for a, b in zip(k1, k2))] += c1 * c2
        # The unknown tail of one factor is lifted by the other's positive weight.
        precision = _min_precision(_lifted(self.precision, other), _lifted(other.precision, self))
        return CompletedClass(self.realization, acc, precision)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self.terms) == 1 and self.terms[0][1] in (1, -1):
                (key, c), = self.terms
                return CompletedClass(self.realization, {tuple(e * n for e in key): c ** (-n)}, self.precision)
            raise ValueError("only unit monomials can be raised to negative powers")
        result = CompletedClass(self.realization, {self.realization.lefschetz_key(0): 1}, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- filtration -------------------------------------------------------

    def vdim(self) -> float | int:
        if not self.terms:
            return math.inf
        return -self.weight()

    def truncate(self, n: int) -> CompletedClass:
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"truncation precision must be >= 1, got {n!r}")
        return CompletedClass(self.realization, self.terms, _min_precision(n, self.precision))

    def evaluate(self, q: int) -> Fraction:
        """Substitute ``L = q``; exact rational result."""
        if self.realization.tag == "count":
            if self.realization.q != q:
                raise RealizationMismatch(f"class is realized at q={self.realization.q}, asked for q={q}")
            coeffs = {k[0]: c for k, c in self.terms}
        else:
            coeffs = self.tate_coefficients()
        return sum((Fraction(q) ** k * c for k, c in coeffs.items()), Fraction(0))

    # -- display ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            body = "0"
        else:
            parts = []
            for key, c in sorted(self.terms, key=lambda kc: (-_weight(kc[0]), [-e for e in kc[0]])):
                mono = _format_monomial(key)
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                if mono == "1":
                    text = str(mag)
                elif mag == 1:
                    text = mono
                else:
                    text = f"{mag}*{mono}"
                parts.append((sign, text))
            first_sign, first = parts[0]
            body = ("-" if first_sign == "-" else "") + first
            for sign, text in parts[1:]:
                body += f" {sign} {text}"
        if self.precision is not None:
            body += f"  (mod L^-{self.precision})"
        return body


def _format_power(sym: str, e: int) -> str:
    if e == 0:
        return ""
    return sym if e == 1 else f"{sym}^{e}"


def _format_monomial(key: Key) -> str:
    if len(key) == 1 or key[0] == key[1]:
        return _format_power("L", key[0]) or "1"
    factors = [f for f in (_format_power("u", key[0]), _format_power("v", key[1])) if f]
    return "*".join(factors) or "1"


def lefschetz(realization: Realization = HODGE, k: int = 1) -> CompletedClass:
    """The class ``L^k``."""
    return CompletedClass(realization, {realization.lefschetz_key(k): 1})


def one(realization: Realization = HODGE) -> CompletedClass:
    return lefschetz(realization, 0)


def zero(realization: Realization = HODGE, precision: int | None = None) -> CompletedClass:
    return CompletedClass(realization, (), precision)


def tate(coeffs: Mapping[int, int] | Iterable[int], realization: Realization = HODGE,
         precision: int | None = None) -> CompletedClass:
    """Build ``sum c_k L^k`` from ``{k: c_k}`` or from a coefficient list indexed by k."""
    if not isinstance(coeffs, Mapping):
        coeffs = dict(enumerate(coeffs))
    return CompletedClass(realization, {realization.lefschetz_key(k): c for k, c in coeffs.items()}, precision)


def hodge_u() -> CompletedClass:
    return CompletedClass(HODGE, {(1, 0): 1})


def hodge_v() -> CompletedClass:
    return CompletedClass(HODGE, {(0, 1): 1})


@dataclass(frozen=True, eq=False)
class RationalClass:
    """Closed form ``numerator * L^lshift / prod_e (L^e - 1)``.

    Equality is decided by cross-multiplication; there is no normal form.
    """

    numerator: CompletedClass
    lshift: int = 0
    denominator_factors: tuple = ()

    def __post_init__(self):
        if not self.numerator.is_exact:
            raise ValueError("the numerator of a closed form must be exact")
        factors = tuple(sorted(int(e) for e in self.denominator_factors))
        if any(e < 1 for e in factors):
            raise ValueError(f"denominator factors must be >= 1, got {factors}")
        object.__setattr__(self, "denominator_factors", factors)

    @property
    def realization(self) -> Realization:
        return self.numerator.realization

    def denominator(self) -> CompletedClass:
        L = lefschetz(self.realization)
        den = one(self.realization)
        for e in self.denominator_factors:
            den = den * (L ** e - 1)
        return den

    def cross_terms(self, other: RationalClass) -> tuple[CompletedClass, CompletedClass]:
        if self.realization != other.realization:
            raise RealizationMismatch(f"{self.realization} vs {other.realization}")
        left = self.numerator.shift(self.lshift) * other.denominator()
        right = other.numerator.shift(other.lshift) * self.denominator()
        return left, right

    def equals(self, other: RationalClass) -> bool:
        left, right = self.cross_terms(other)
        return left == right

    def __eq__(self, other):
        if not isinstance(other, RationalClass):
            return NotImplemented
        if self.realization != other.realization:
            return False
        return self.equals(other)

    __hash__ = None

    def __add__(self, other: RationalClass) -> RationalClass:
        if self.realization != other.realization:
            raise RealizationMismatch(f"{self.realization} vs {other.realization}")
        base = min(self.lshift, other.lshift)
        num = (self.numerator.shift(self.lshift - base) * other.denominator()
               + other.numerator.shift(other.lshift - base) * self.denominator())
        return RationalClass(num, base, self.denominator_factors + other.denominator_factors)

    def expand(self, precision: int, realization: Realization | None = None) -> CompletedClass:
        return expand_rational(self, realization or self.realization, precision)

    def evaluate(self, q: int) -> Fraction:
        value = self.numerator.evaluate(q) * Fraction(q) ** self.lshift
        for e in self.denominator_factors:
            value /= q ** e - 1
        return value

    def __str__(self):
        shifted = self.numerator.shift(self.lshift)
        num = str(shifted)
        if len(shifted.terms) > 1 and self.denominator_factors:
            num = f"({num})"
        if not self.denominator_factors:
            return num
        dens = [f"({_format_power('L', e)} - 1)" for e in self.denominator_factors]
        return f"{num}/{'*'.join(dens) if len(dens) == 1 else '(' + '*'.join(dens) + ')'}"

    def __repr__(self):
        return f"RationalClass({self})"


# -- module-level operations ----------------------------------------------

def ring_arith(op: str, x: CompletedClass, y: CompletedClass) -> CompletedClass:
    if x.realization != y.realization:
        raise RealizationMismatch(f"{x.realization} vs {y.realization}")
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown ring operation {op!r}")


def _geometric_product(factors: Iterable[int], degree: int) -> list[int]:
    """Coefficients in y = L^-1 of prod_e y^e / (1 - y^e), up to y^degree."""
    series = [1] + [0] * degree
    for e in factors:
        new = [0] * (degree + 1)
        # new = y^e * (series + new)
        for s in range(e, degree + 1):
            new[s] = series[s - e] + new[s - e]
        series = new
    return series


def expand_rational(r: RationalClass, realization: Realization, precision: int) -> CompletedClass:
    """Truncated Laurent expansion of a closed form at ``L = infinity``.

    Each ``1/(L^e - 1)`` becomes ``L^-e + L^-2e + ...``.  A numerator term of
    weight ``w`` times ``L^(lshift - s)`` survives iff ``w + lshift - s > -N``,
    so the product series is needed up to ``y^(top + lshift + N - 1)``.
    """
    if not isinstance(precision, int) or precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision!r}")
    num = r.numerator.to_realization(realization)
    top = num.weight()
    if top is None:
        return zero(realization, precision)
    degree = top + r.lshift + precision - 1
    if degree < 0:
        return zero(realization, precision)
    series = _geometric_product(r.denominator_factors, degree)
    acc: dict[Key, int] = defaultdict(int)
    for key, c in num.terms:
        for s, g in enumerate(series):
            if g:
                acc[tuple(e + r.lshift - s for e in key)] += c * g
    return CompletedClass(realization, acc, precision)


def vdim(x: CompletedClass) -> float | int:
    """Virtual dimension: ``+inf`` for 0, else minus the largest monomial weight."""
    return x.vdim()


def truncate(x: CompletedClass, n: int) -> CompletedClass:
    return x.truncate(n)


def realize_count(x: CompletedClass | RationalClass, q: int) -> Fraction:
    """Counting measure: substitute ``L = q`` exactly."""
    return x.evaluate(q)


def eq_class(x: CompletedClass, y: CompletedClass) -> bool:
    if x.realization != y.realization:
        raise RealizationMismatch(f"{x.realization} vs {y.realization}")
    p = _min_precision(x.precision, y.precision)
    if p is None:
        return x.terms == y.terms
    return x.truncate(p).terms == y.truncate(p).terms


# -- JSON -------------------------------------------------------------------

def class_to_json(x: CompletedClass) -> dict:
    doc = {
        "realization": x.realization.tag,
        "precision": "exact" if x.precision is None else x.precision,
        "monomials": [[*key, str(c)] for key, c in x.terms],
    }
    if x.realization.q is not None:
        doc["q"] = x.realization.q
    return doc


def class_from_json(doc, path: str = "$") -> CompletedClass:
    if not isinstance(doc, dict):
        raise InputError("class must be a JSON object", path)
    tag = doc.get("realization")
    try:
        if tag == "hodge":
            if "q" in doc:
                raise InputError("hodge classes take no q", f"{path}.q")
            realization = HODGE
        elif tag == "count":
            realization = counting(doc.get("q"))
        else:
            raise InputError(f"realization must be 'hodge' or 'count', got {tag!r}", f"{path}.realization")
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc), f"{path}.q") from None
    prec = doc.get("precision", "exact")
    if prec == "exact":
        precision = None
    elif isinstance(prec, int) and not isinstance(prec, bool) and prec >= 1:
        precision = prec
    else:
        raise InputError(f"precision must be 'exact' or an integer >= 1, got {prec!r}", f"{path}.precision")
    monos = doc.get("monomials")
    if not isinstance(monos, list):
        raise InputError("monomials must be a list", f"{path}.monomials")
    arity = realization.arity
    terms: dict[Key, int] = {}
    for i, entry in enumerate(monos):
        where = f"{path}.monomials[{i}]"
        if (not isinstance(entry, list) or len(entry) != arity + 1
                or not all(isinstance(e, int) and not isinstance(e, bool) for e in entry[:arity])
                or not isinstance(entry[arity], str)):
            raise InputError(f"expected {arity} integer exponents and a decimal-string coefficient", where)
        try:
            coeff = int(entry[arity])
        except ValueError:
            raise InputError(f"coefficient {entry[arity]!r} is not a decimal integer", where) from None
        key = tuple(entry[:arity])
        if key in terms:
            raise InputError(f"duplicate monomial {list(key)}", where)
        if coeff == 0:
            raise InputError("zero coefficients are not canonical", where)
        if precision is not None and max(key) <= -precision:
            raise InputError(f"monomial {list(key)} lies below the precision cutoff", where)
        terms[key] = coeff
    return CompletedClass(realization, terms, precision)


def rational_to_json(r: RationalClass) -> dict:
    return {
        "numerator": class_to_json(r.numerator),
        "lshift": r.lshift,
        "denominator": list(r.denominator_factors),
    }
