"""Brute-force point and jet counting over prime fields.

This module is the independent check on everything the class calculus
claims.  It knows nothing about classes: it enumerates tuples of truncated
power series over F_q, pushes them through integer polynomials, and counts.

Enumeration order is lexicographic over the coefficient tuple
``(x_0[t^0], ..., x_0[t^m], x_1[t^0], ..., x_{n-1}[t^m])`` with the last
entry varying fastest.  Work is split into contiguous index blocks (fixing
the leading coefficients), evaluated with numpy, and reduced in block order,
so results do not depend on the thread count.
"""
from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    InputError,
    LevelTooLow,
    NonPolynomialClass,
)
from .motive_ring import CompletedClass, Realization

__all__ = [
    "Polynomial",
    "variables",
    "AffineSchemeSpec",
    "EnumerationBudget",
    "JetLawReport",
    "FibrationReport",
    "ZetaFunction",
    "THREADS_ENV",
    "count_points",
    "count_jets",
    "jet_law_report",
    "contact_order_histogram",
    "count_contact_locus",
    "fibration_fiber_counts",
    "blowup_chart_schemes",
    "zeta_closed_form",
]

THREADS_ENV = "MOTINT_THREADS"
MAX_VARS = 8
MAX_DEGREE = 64
_BLOCK = 1 << 16


@dataclass(frozen=True)
class Polynomial:
    """Integer polynomial in ``n_vars`` variables, stored as sparse ``(coeff, exponents)`` terms."""

    n_vars: int
    terms: tuple = ()

    def __post_init__(self):
        acc: dict[tuple, int] = {}
        for coeff, exps in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.n_vars:
                raise ValueError(f"exponent vector {exps} does not have {self.n_vars} entries")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            acc[exps] = acc.get(exps, 0) + int(coeff)
        object.__setattr__(
            self, "terms", tuple((c, e) for e, c in sorted(acc.items()) if c != 0)
        )

    @classmethod
    def variable(cls, i: int, n_vars: int) -> Polynomial:
        return cls(n_vars, ((1, tuple(int(j == i) for j in range(n_vars))),))

    @classmethod
    def constant(cls, c: int, n_vars: int) -> Polynomial:
        return cls(n_vars, ((c, (0,) * n_vars),))

    def degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    def _coerce(self, other):
        if isinstance(other, int):
            return Polynomial.constant(other, self.n_vars)
        if isinstance(other, Polynomial) and other.n_vars == self.n_vars:
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.n_vars, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n_vars, tuple((-c, e) for c, e in self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(
            self.n_vars,
            tuple(
                (c1 * c2, tuple(a + b for a, b in zip(e1, e2)))
                for c1, e1 in self.terms
                for c2, e2 in other.terms
            ),
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Polynomial.constant(1, self.n_vars)
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, *point: int) -> int:
        total = 0
        for c, exps in self.terms:
            v = c
            for x, e in zip(point, exps):
                v *= x ** e
            total += v
        return total

    def to_json(self) -> dict:
        return {"vars": self.n_vars, "terms": [[c, list(e)] for c, e in self.terms]}

    @classmethod
    def from_json(cls, doc, path: str = "$") -> Polynomial:
        if not isinstance(doc, dict) or set(doc) != {"vars", "terms"}:
            raise InputError("polynomial must be an object with 'vars' and 'terms'", path)
        n = doc["vars"]
        if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_VARS:
            raise InputError(f"vars must be an integer in [1, {MAX_VARS}]", f"{path}.vars")
        terms = []
        if not isinstance(doc["terms"], list):
            raise InputError("terms must be a list", f"{path}.terms")
        for i, t in enumerate(doc["terms"]):
            where = f"{path}.terms[{i}]"
            if (not isinstance(t, list) or len(t) != 2 or not isinstance(t[0], int)
                    or not isinstance(t[1], list) or len(t[1]) != n
                    or not all(isinstance(e, int) and e >= 0 for e in t[1])):
                raise InputError(f"term must be [coeff, [e_1..e_{n}]] with exponents >= 0", where)
            terms.append((t[0], tuple(t[1])))
        p = cls(n, tuple(terms))
        if p.to_json() != doc:
            raise InputError("terms must be canonical: sorted, merged, nonzero", f"{path}.terms")
        return p


def variables(n: int) -> list[Polynomial]:
    return [Polynomial.variable(i, n) for i in range(n)]


@dataclass(frozen=True)
class AffineSchemeSpec:
    """``{f_1 = ... = f_r = 0, g_1 != 0, ..., g_s != 0}`` inside ``A^n``."""

    n_vars: int
    equations: tuple = ()
    inequations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        object.__setattr__(self, "inequations", tuple(self.inequations))
        problems = self.issues()
        if problems:
            raise ValueError(problems[0])

    def issues(self) -> list[str]:
        out = []
        if not 1 <= self.n_vars <= MAX_VARS:
            out.append(f"n_vars must be in [1, {MAX_VARS}], got {self.n_vars}")
        for p in self.equations + self.inequations:
            if p.n_vars != self.n_vars:
                out.append(f"polynomial in {p.n_vars} variables inside A^{self.n_vars}")
            if p.degree() > MAX_DEGREE:
                out.append(f"total degree {p.degree()} exceeds {MAX_DEGREE}")
        return out

    def to_json(self) -> dict:
        return {
            "vars": self.n_vars,
            "equations": [p.to_json() for p in self.equations],
            "inequations": [p.to_json() for p in self.inequations],
        }

    @classmethod
    def from_json(cls, doc, path: str = "$") -> AffineSchemeSpec:
        if not isinstance(doc, dict) or set(doc) != {"vars", "equations", "inequations"}:
            raise InputError("scheme must be an object with 'vars', 'equations', 'inequations'", path)
        n = doc["vars"]
        if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= MAX_VARS:
            raise InputError(f"vars must be an integer in [1, {MAX_VARS}]", f"{path}.vars")
        polys = {}
        for key in ("equations", "inequations"):
            if not isinstance(doc[key], list):
                raise InputError(f"{key} must be a list", f"{path}.{key}")
            polys[key] = tuple(
                Polynomial.from_json(p, f"{path}.{key}[{i}]") for i, p in enumerate(doc[key])
            )
        try:
            return cls(n, polys["equations"], polys["inequations"])
        except ValueError as exc:
            raise InputError(str(exc), path) from None


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return n
    return os.cpu_count() or 1


@dataclass(frozen=True)
class EnumerationBudget:
    max_states: int = 10**9
    threads: int | None = None

    def __post_init__(self):
        if self.max_states <= 0:
            raise ValueError("max_states must be positive")
        if self.threads is not None and self.threads < 1:
            raise ValueError("threads must be >= 1")

    def resolved_threads(self) -> int:
        return self.threads if self.threads is not None else _default_threads()

    def check(self, states: int, what: str):
        if states > self.max_states:
            raise BudgetExceeded(f"{what} needs {states} states, budget is {self.max_states}")


DEFAULT_BUDGET = EnumerationBudget()


# -- vectorized truncated power series over F_q ----------------------------

def _series_mul(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Product of two batches of series mod (t^(m+1), q); shape (batch, m+1)."""
    width = a.shape[1]
    out = np.zeros_like(a)
    for k in range(width):
        acc = a[:, 0] * b[:, k]
        for j in range(1, k + 1):
            acc = acc + a[:, j] * b[:, k - j]
        out[:, k] = acc % q
    return out


class _Evaluator:
    """Evaluates polynomials on a block of jets, caching variable powers."""

    def __init__(self, series: list[np.ndarray], q: int):
        self.series = series
        self.q = q
        self._powers: dict[tuple[int, int], np.ndarray] = {}

    def power(self, i: int, e: int) -> np.ndarray:
        key = (i, e)
        if key not in self._powers:
            if e == 1:
                self._powers[key] = self.series[i]
            else:
                half = self.power(i, e // 2)
                sq = _series_mul(half, half, self.q)
                self._powers[key] = _series_mul(sq, self.series[i], self.q) if e % 2 else sq
        return self._powers[key]

    def __call__(self, p: Polynomial) -> np.ndarray:
        batch, width = self.series[0].shape
        total = np.zeros((batch, width), dtype=np.int64)
        for c, exps in p.terms:
            term = None
            for i, e in enumerate(exps):
                if e:
                    f = self.power(i, e)
                    term = f if term is None else _series_mul(term, f, self.q)
            c %= self.q
            if term is None:
                total[:, 0] += c
            else:
                total += c * term
            total %= self.q
        return total


def _valuation(s: np.ndarray) -> np.ndarray:
    """t-adic order per row; ``width`` (= m+1) means the series vanishes mod t^(m+1)."""
    nz = s != 0
    return np.where(nz.any(axis=1), nz.argmax(axis=1), s.shape[1])


def _blocks(total: int):
    for start in range(0, total, _BLOCK):
        yield start, min(_BLOCK, total - start)


def _decode(start: int, size: int, q: int, n_digits: int) -> np.ndarray:
    idx = np.arange(start, start + size, dtype=np.int64)
    digits = np.empty((size, n_digits), dtype=np.int64)
    for p in range(n_digits - 1, -1, -1):
        digits[:, p] = idx % q
        idx //= q
    return digits


def _jets_block(start: int, size: int, q: int, n_vars: int, m: int) -> list[np.ndarray]:
    w = m + 1
    digits = _decode(start, size, q, n_vars * w)
    return [digits[:, i * w:(i + 1) * w] for i in range(n_vars)]


def _map_blocks(fn, total: int, threads: int) -> list:
    blocks = list(_blocks(total))
    if threads <= 1 or len(blocks) <= 1:
        return [fn(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, blocks))


def _scheme_mask(ev: _Evaluator, s: AffineSchemeSpec, batch: int) -> np.ndarray:
    mask = np.ones(batch, dtype=bool)
    for f in s.equations:
        mask &= ~(ev(f) != 0).any(axis=1)
    for g in s.inequations:
        mask &= ev(g)[:, 0] != 0
    return mask


def _check_q(q: int):
    Realization("count", q)


def count_jets(s: AffineSchemeSpec, q: int, m: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
    """Number of ``m``-jets over F_q: tuples of series mod ``t^(m+1)`` solving the equations.

    Inequations constrain the base point (the constant term must be a unit).
    """
    _check_q(q)
    if m < 0:
        raise ValueError(f"jet level must be >= 0, got {m}")
    total = q ** (s.n_vars * (m + 1))
    budget.check(total, f"jets of order {m} in A^{s.n_vars} over F_{q}")

    def block(b):
        start, size = b
        ev = _Evaluator(_jets_block(start, size, q, s.n_vars, m), q)
        return int(_scheme_mask(ev, s, size).sum())

    return sum(_map_blocks(block, total, budget.resolved_threads()))


def count_points(s: AffineSchemeSpec, q: int, budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
    return count_jets(s, q, 0, budget)


@dataclass(frozen=True)
class JetLawReport:
    count: int
    points: int
    predicted: int
    holds: bool


def jet_law_report(s: AffineSchemeSpec, q: int, m: int, dim: int,
                   budget: EnumerationBudget = DEFAULT_BUDGET) -> JetLawReport:
    """Raw jet count next to the smooth-case prediction ``q^(md) * #X(F_q)``.

    For a singular scheme the comparison is informational only.
    """
    jets = count_jets(s, q, m, budget)
    pts = count_points(s, q, budget)
    predicted = q ** (m * dim) * pts
    return JetLawReport(jets, pts, predicted, jets == predicted)


# -- contact loci ---------------------------------------------------------------

@lru_cache(maxsize=64)
def _histogram(ambient_n: int, polys: tuple, q: int, m: int, max_states: int, threads: int) -> tuple:
    total = q ** (ambient_n * (m + 1))
    EnumerationBudget(max_states).check(total, f"jets of order {m} in A^{ambient_n} over F_{q}")
    base = m + 2

    def block(b):
        start, size = b
        ev = _Evaluator(_jets_block(start, size, q, ambient_n, m), q)
        key = np.zeros(size, dtype=np.int64)
        for g in polys:
            key = key * base + _valuation(ev(g))
        keys, counts = np.unique(key, return_counts=True)
        return dict(zip(keys.tolist(), counts.tolist()))

    hist: Counter = Counter()
    for part in _map_blocks(block, total, threads):
        hist.update(part)
    out = {}
    for key, count in sorted(hist.items()):
        vec = []
        for _ in polys:
            key, r = divmod(key, base)
            vec.append(r)
        out[tuple(reversed(vec))] = count
    return tuple(sorted(out.items()))


def contact_order_histogram(ambient_n: int, divisor: Sequence, q: int, m: int,
                            budget: EnumerationBudget = DEFAULT_BUDGET) -> dict:
    """Count ``m``-jets of ``A^n`` by their vector of t-adic orders along each ``g_i``.

    An order of ``m + 1`` means ``g_i`` vanishes to order at least ``m + 1``
    and is therefore undetermined at this level.
    """
    _check_q(q)
    polys = tuple(g for g, _ in divisor)
    for g in polys:
        if g.n_vars != ambient_n:
            raise ValueError(f"divisor polynomial in {g.n_vars} variables inside A^{ambient_n}")
    return dict(_histogram(ambient_n, polys, q, m, budget.max_states, budget.resolved_threads()))


def count_contact_locus(ambient_n: int, divisor: Sequence, q: int, m: int,
                        contact: Sequence[int] | None = None, order: int | None = None,
                        budget: EnumerationBudget = DEFAULT_BUDGET) -> int:
    """Number of ``m``-jets with a prescribed contact vector, or with ``ord_D = order``.

    ``divisor`` is a sequence of ``(g_i, a_i)``.  A contact entry of 0 means
    the jet's base point is off that component.
    """
    if (contact is None) == (order is None):
        raise ValueError("give exactly one of contact or order")
    mults = [a for _, a in divisor]
    if contact is not None:
        contact = tuple(contact)
        if len(contact) != len(divisor) or any(c < 0 for c in contact):
            raise ValueError(f"contact vector {list(contact)} does not match the divisor")
        if m < sum(contact):
            raise LevelTooLow(f"level {m} is below the total contact {sum(contact)}")
    else:
        if order < 0:
            raise ValueError("order must be >= 0")
        if m < order:
            raise LevelTooLow(f"level {m} is below the order {order}")
    hist = contact_order_histogram(ambient_n, divisor, q, m, budget)
    if contact is not None:
        return hist.get(contact, 0)
    return sum(
        n for vec, n in hist.items()
        if all(v <= m for v in vec) and sum(a * v for a, v in zip(mults, vec)) == order
    )


# -- blow-up charts -------------------------------------------------------------

def _point_blowup_charts(d: int):
    """Chart ``i`` of ``Bl_0 A^d``: ``x_i = u_i``, ``x_j = u_i u_j``; keeps ``u_j(0) = 0`` for ``j < i``.

    The pieces are disjoint and cover the blow-up; the Jacobian determinant
    on chart ``i`` is ``u_i^(d-1)``.
    """
    u = variables(d)
    charts = []
    for i in range(d):
        image = [u[i] if j == i else u[i] * u[j] for j in range(d)]
        charts.append((image, tuple(range(i)), u[i] ** (d - 1)))
    return charts


@dataclass
class FibrationReport:
    q: int
    m: int
    e: int
    fiber_sizes: dict = field(default_factory=dict)  # size -> number of image jets
    union_of_fibers: bool = True
    passed: bool = False

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "m": self.m,
            "e": self.e,
            "expected_fiber_size": self.q ** self.e,
            "fiber_sizes": {str(k): v for k, v in sorted(self.fiber_sizes.items())},
            "union_of_fibers": self.union_of_fibers,
            "passed": self.passed,
        }


def fibration_fiber_counts(q: int, m: int, e: int, budget: EnumerationBudget = DEFAULT_BUDGET,
                           d: int = 2) -> FibrationReport:
    """Fibers of ``f_m: J_m(Bl_0 A^d) -> J_m(A^d)`` over the image of ``ord_K = e``.

    Every ``m``-jet of the blow-up is enumerated chart by chart and pushed
    down.  The report passes iff each image of a jet with ``ord_K = e`` has
    exactly ``q^e`` preimages, all of them with ``ord_K = e``.
    """
    _check_q(q)
    if m < 2 * e:
        raise LevelTooLow(f"the fibration statement needs m >= 2e, got m={m}, e={e}")
    if e < 0:
        raise ValueError("e must be >= 0")
    charts = _point_blowup_charts(d)
    per_chart = q ** (d * (m + 1))
    budget.check(per_chart * len(charts), f"jets of order {m} on Bl_0 A^{d} over F_{q}")
    width = m + 1
    threads = budget.resolved_threads()

    all_hits: Counter = Counter()
    good_hits: Counter = Counter()
    for image, zero_base, jac in charts:
        def block(b, image=image, zero_base=zero_base, jac=jac):
            start, size = b
            ev = _Evaluator(_jets_block(start, size, q, d, m), q)
            keep = np.ones(size, dtype=bool)
            for j in zero_base:
                keep &= ev.series[j][:, 0] == 0
            key = np.zeros(size, dtype=np.int64)
            for f in image:
                vals = ev(f)
                for k in range(width):
                    key = key * q + vals[:, k]
            good = keep & (_valuation(ev(jac)) == e)
            ka, ca = np.unique(key[keep], return_counts=True)
            kg, cg = np.unique(key[good], return_counts=True)
            return dict(zip(ka.tolist(), ca.tolist())), dict(zip(kg.tolist(), cg.tolist()))

        for a, g in _map_blocks(block, per_chart, threads):
            all_hits.update(a)
            good_hits.update(g)

    sizes: Counter = Counter()
    union = True
    for key, n_good in good_hits.items():
        n_all = all_hits[key]
        sizes[n_all] += 1
        if n_all != n_good:
            union = False
    report = FibrationReport(q, m, e, dict(sorted(sizes.items())), union)
    report.passed = union and bool(sizes) and set(sizes) == {q ** e}
    return report


def blowup_chart_schemes(d: int, z: int = 0) -> tuple[list[AffineSchemeSpec], list[AffineSchemeSpec]]:
    """Disjoint chart pieces of the blow-up of ``A^d`` along ``{x_0 = ... = x_(c-1) = 0}``.

    Variables are ``x_0..x_(d-1)`` then ``v_0..v_(c-1)`` (a point of the
    exceptional ``P^(c-1)`` in the chart ``v_i = 1``, ``v_j = 0`` for ``j < i``).
    Returns the pieces of the blow-up and of its exceptional divisor.
    """
    c = d - z
    if c < 2 or z < 0:
        raise ValueError(f"center of dim {z} in A^{d} must have codimension >= 2")
    n = d + c
    if n > MAX_VARS:
        raise ValueError(f"needs {n} variables, at most {MAX_VARS} supported")
    gens = variables(n)
    x, v = gens[:d], gens[d:]
    pieces, exceptional = [], []
    for i in range(c):
        eqs = [v[i] - 1]
        eqs += [v[j] for j in range(i)]
        eqs += [x[j] - x[i] * v[j] for j in range(c) if j != i]
        pieces.append(AffineSchemeSpec(n, tuple(eqs)))
        exceptional.append(AffineSchemeSpec(n, tuple(eqs + [x[i]])))
    return pieces, exceptional


# -- zeta functions --------------------------------------------------------------

@dataclass(frozen=True)
class ZetaFunction:
    """``prod_k (1 - q^k t)^(n_k)`` kept in factored form.

    ``factors`` is a sorted tuple of ``(k, n_k)`` with ``n_k != 0``.
    """

    q: int
    factors: tuple = ()

    def taylor(self, terms: int) -> list[Fraction]:
        coeffs = [Fraction(1)] + [Fraction(0)] * (terms - 1)
        for k, n in self.factors:
            r = self.q ** k
            for _ in range(abs(n)):
                if n > 0:
                    # multiply by (1 - r t)
                    coeffs = [coeffs[0]] + [coeffs[i] - r * coeffs[i - 1] for i in range(1, terms)]
                else:
                    # divide by (1 - r t)
                    for i in range(1, terms):
                        coeffs[i] += r * coeffs[i - 1]
        return coeffs

    def point_count(self, n: int) -> int:
        """``#X(F_(q^n))`` read off the factors."""
        return sum(-e * self.q ** (k * n) for k, e in self.factors)

    def __str__(self):
        def factor(k):
            return "(1 - t)" if k == 0 else f"(1 - {self.q ** k}t)"

        num = [factor(k) + (f"^{e}" if e > 1 else "") for k, e in reversed(self.factors) if e > 0]
        den = [factor(k) + (f"^{-e}" if e < -1 else "") for k, e in reversed(self.factors) if e < 0]
        top = "*".join(num) or "1"
        if not den:
            return top
        bottom = den[0] if len(den) == 1 else "(" + "*".join(den) + ")"
        return f"{top}/{bottom}"

    def to_json(self) -> dict:
        return {"q": self.q, "factors": [[k, e] for k, e in self.factors], "text": str(self)}


def zeta_closed_form(c: CompletedClass, q: int) -> ZetaFunction:
    """Zeta function of a polynomial-count class ``sum c_k L^k`` over F_q."""
    _check_q(q)
    if c.realization.tag == "count":
        coeffs = {k[0]: v for k, v in c.terms}
    else:
        coeffs = c.tate_coefficients()
    if any(k < 0 for k in coeffs):
        raise NonPolynomialClass(f"class {c} has negative powers of L")
    return ZetaFunction(q, tuple(sorted((k, -v) for k, v in coeffs.items())))
