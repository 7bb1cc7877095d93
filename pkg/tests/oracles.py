"""Reference computations that share no code with the package.

Each oracle takes a different route from the implementation it checks:
Laurent expansion by long division instead of geometric-series products,
point counts by plain itertools loops instead of vectorized blocks, zeta
functions from the exponential of the point-count series instead of the
factored closed form.
"""
from __future__ import annotations

import itertools
from fractions import Fraction


def long_division(num: dict[int, int], lshift: int, den_factors, precision: int) -> dict[int, int]:
    """Expand ``num(L) * L^lshift / prod (L^e - 1)`` in ``L^-1`` down to weight ``-precision + 1``.

    ``num`` maps exponents of L to integer coefficients.  Works in the
    variable ``y = L^-1``: write everything as a polynomial in ``y`` times a
    power of ``L`` and solve ``D(y) S(y) = N(y)`` one coefficient at a time.
    """
    if not num:
        return {}
    top = max(num)
    deg_den = sum(den_factors)
    # L^top * N'(y) with N'(y) = sum c_k y^(top - k)
    n_poly = {top - k: c for k, c in num.items()}
    # prod (L^e - 1) = L^deg_den * prod (1 - y^e)
    d_poly = {0: 1}
    for e in den_factors:
        nxt: dict[int, int] = {}
        for i, c in d_poly.items():
            nxt[i] = nxt.get(i, 0) + c
            nxt[i + e] = nxt.get(i + e, 0) - c
        d_poly = nxt
    lead = top + lshift - deg_den  # the expansion is L^lead * S(y)
    n_terms = lead + precision
    s: list[int] = []
    for i in range(max(n_terms, 0)):
        acc = n_poly.get(i, 0) - sum(d_poly.get(j, 0) * s[i - j] for j in range(1, i + 1))
        s.append(acc)  # d_poly[0] == 1
    return {lead - i: c for i, c in enumerate(s) if c and lead - i > -precision}


def _poly_eval(terms, point, q):
    total = 0
    for coeff, exps in terms:
        v = coeff
        for x, e in zip(point, exps):
            v *= x ** e
        total += v
    return total % q


def brute_count(n_vars: int, equations, q: int, inequations=()) -> int:
    """``#{x in F_q^n : all equations vanish, no inequation vanishes}``.

    Polynomials are ``[(coeff, exps), ...]`` lists.
    """
    count = 0
    for pt in itertools.product(range(q), repeat=n_vars):
        if all(_poly_eval(f, pt, q) == 0 for f in equations) and all(
            _poly_eval(g, pt, q) != 0 for g in inequations
        ):
            count += 1
    return count


def _series_mul(a, b, m, q):
    out = [0] * (m + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(m + 1 - i):
                out[i + j] = (out[i + j] + x * b[j]) % q
    return out


def _series_poly(terms, series, m, q):
    total = [0] * (m + 1)
    for coeff, exps in terms:
        v = [coeff % q] + [0] * m
        for s, e in zip(series, exps):
            for _ in range(e):
                v = _series_mul(v, s, m, q)
        total = [(x + y) % q for x, y in zip(total, v)]
    return total


def brute_jet_orders(n_vars: int, polys, q: int, m: int):
    """Yield, for every m-jet of A^n over F_q, the t-orders of each polynomial (m+1 if it vanishes)."""
    for flat in itertools.product(range(q), repeat=n_vars * (m + 1)):
        series = [list(flat[i * (m + 1):(i + 1) * (m + 1)]) for i in range(n_vars)]
        orders = []
        for g in polys:
            vals = _series_poly(g, series, m, q)
            orders.append(next((k for k, c in enumerate(vals) if c), m + 1))
        yield tuple(orders)


def brute_jet_count(n_vars: int, equations, q: int, m: int) -> int:
    return sum(all(o == m + 1 for o in orders) for orders in brute_jet_orders(n_vars, equations, q, m))


def zeta_from_counts(counts, terms: int) -> list[Fraction]:
    """Taylor coefficients of ``exp(sum_r N_r t^r / r)`` up to ``t^(terms-1)``.

    ``counts[r-1]`` is ``N_r``.  Uses ``n a_n = sum_{r=1}^n N_r a_(n-r)``.
    """
    a = [Fraction(1)]
    for n in range(1, terms):
        a.append(sum(Fraction(counts[r - 1]) * a[n - r] for r in range(1, n + 1)) / n)
    return a
