"""Acceptance criteria 1-10, each with its runtime limit.

Every criterion prints one ``PASS``/``FAIL`` line (also collected into the
pytest terminal summary).  Run standalone with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from motint.corpus import example_ids, load_example  # noqa: E402
from motint.counting_oracle import (  # noqa: E402
    count_contact_locus,
    count_jets,
    count_points,
    fibration_fiber_counts,
    zeta_closed_form,
)
from motint.geometry import SNCModel, affine_space, blowup_classes, motive_class  # noqa: E402
from motint.integrator import integrate_snc, kequiv_check, transform_check  # noqa: E402
from motint.jets import ContactDatum, contact_measure, cylinder_measure, subvariety_cylinder, subvariety_vdim_bound  # noqa: E402
from motint.motive_ring import HODGE, expand_rational, lefschetz, realize_count, vdim  # noqa: E402

import ring_laws  # noqa: E402
from acceptance_log import RESULTS  # noqa: E402
from oracles import long_division  # noqa: E402

L = lefschetz()


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time the body; record and print one line; fail on error or overrun."""
    start = time.perf_counter()
    ok, detail = False, ""
    try:
        yield
        ok = True
    except AssertionError as exc:
        detail = f": {exc}" if str(exc) else ""
        raise
    finally:
        elapsed = time.perf_counter() - start
        if ok and elapsed >= limit:
            ok, detail = False, f": took {elapsed:.2f}s, limit {limit}s"
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({elapsed:.2f}s < {limit}s){detail}"
        RESULTS.append(line)
        print(line)
    assert elapsed < limit, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def bundled_varieties():
    """Every variety that appears in a bundled example, by name."""
    out = {}
    for ident in example_ids():
        ex = load_example(ident)
        if ex.kind == "snc":
            found = [ex.snc.ambient]
        elif ex.kind == "transform":
            found = [ex.lhs.ambient, ex.rhs.ambient]
        elif ex.kind == "kequiv":
            found = [ex.pair.left, ex.pair.right, ex.pair.resolution]
        else:
            found = [ex.variety]
        for x in found:
            out[(x.name, x.cls.terms)] = x
    return list(out.values())


def test_criterion_01_empty_divisor_identity():
    with criterion(1, "integral of the empty divisor equals [X] L^-d for every bundled smooth X", 1.0):
        smooth = [x for x in bundled_varieties() if x.smooth]
        assert len(smooth) >= 6
        for x in smooth:
            res = integrate_snc(SNCModel.empty_divisor(x), 10)
            assert res.series == x.cls.shift(-x.dim).truncate(10), x.name
            assert res.series == motive_class(x).truncate(10)


def test_criterion_02_vdim_law():
    with criterion(2, "vdim([X]) = -d for every bundled variety, node included", 1.0):
        names = set()
        for x in bundled_varieties():
            assert vdim(x.cls) == -x.dim, x.name
            names.add(x.name)
        node = load_example("node-threefold").variety
        assert node.cls == L ** 3 + L ** 2 - L and vdim(node.cls) == -3
        assert "node" in names


def test_criterion_03_closed_form_vs_series():
    with criterion(3, "expand_rational(closed form) = truncated series, N = 3..12", 5.0):
        models = [load_example(i).snc for i in ("a1-divisor-a1", "a1-divisor-a2", "a1-divisor-a3", "a2-axes")]
        models += [load_example(i).rhs for i in ("bl-a2-origin", "bl-a3-origin")]
        for m in models:
            for n in range(3, 13):
                res = integrate_snc(m, n)
                assert expand_rational(res.closed, HODGE, n) == res.series


def _first_affected(r1, r2, n):
    """Leading exponent where the long-division expansions of two closed forms differ."""
    def tate_of(r):
        return {k[0]: c for k, c in r.numerator.terms}

    e1 = long_division(tate_of(r1), r1.lshift, r1.denominator_factors, n)
    e2 = long_division(tate_of(r2), r2.lshift, r2.denominator_factors, n)
    diff = {k: e1.get(k, 0) - e2.get(k, 0) for k in set(e1) | set(e2) if e1.get(k, 0) != e2.get(k, 0)}
    top = max(diff)
    return top, diff[top]


def test_criterion_04_transformation_rule():
    with criterion(4, "transform_check passes for the blow-ups, fails for the wrong discrepancy", 5.0):
        for ident in ("bl-a2-origin", "bl-a3-origin", "bl-a2-hyperplane-a1", "bl-a2-hyperplane-a2"):
            ex = load_example(ident)
            rep = transform_check(ex.lhs, blowup_classes(ex.lhs.ambient, ex.center), ex.rhs, 12, ex.pullback_mult)
            assert rep.passed and rep.discrepancy.is_zero(), ident
        ex = load_example("bl-a2-wrong-discrepancy")
        rep = transform_check(ex.lhs, blowup_classes(ex.lhs.ambient, ex.center), ex.rhs, 12)
        assert not rep.passed and not rep.discrepancy.is_zero()
        (a, b), coeff = rep.first_difference()
        assert a == b and (a, coeff) == _first_affected(rep.lhs.closed, rep.rhs.closed, 12) == (-2, 1)


def test_criterion_05_smooth_jet_law():
    with criterion(5, "count_jets({xy=1}, q, m) = q^m (q-1), q in {2,3,5}, m in {1,2}", 60.0):
        scheme = load_example("hyperbola-jets").scheme
        for q in (2, 3, 5):
            for m in (1, 2):
                assert count_jets(scheme, q, m) == q ** m * (q - 1), (q, m)


def _contact_vectors(k, total):
    if k == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _contact_vectors(k - 1, total - first):
            yield (first, *rest)


def test_criterion_06_contact_measure_oracle():
    with criterion(6, "realize_count(contact_measure) q^((m+1)d) = count_contact_locus", 60.0):
        checked = 0
        for ident in ("a1-divisor-a1", "a1-divisor-a2", "a1-divisor-a3", "a2-axes"):
            ex = load_example(ident)
            d = ex.snc.dim
            for q in (2, 3, 5):
                for m in range(4):
                    for vec in _contact_vectors(len(ex.snc.components), m):
                        if any(vec):
                            measure = contact_measure(ContactDatum.from_vector(ex.snc, vec))
                        else:
                            measure = ex.snc.stratum(()).shift(-d)
                        count = count_contact_locus(ex.oracle_vars, ex.oracle_divisor, q, m, contact=vec)
                        assert realize_count(measure, q) * q ** ((m + 1) * d) == count, (ident, q, m, vec)
                        checked += 1
        assert checked > 100


def test_criterion_07_fibration():
    with criterion(7, "Bl_0 A^2, e=1, m=2: every fiber has exactly q points, q in {2,3}", 120.0):
        for q in (2, 3):
            rep = fibration_fiber_counts(q, 2, 1)
            assert rep.passed and set(rep.fiber_sizes) == {q}, rep.fiber_sizes


def test_criterion_08_k_equivalence():
    with criterion(8, "Atiyah flop: common class 1 + L^-1, node counts, chart counts, equal zeta", 30.0):
        ex = load_example("atiyah-flop")
        rep = kequiv_check(ex.pair, 10)
        assert rep.passed and rep.common_class == (1 + L ** -1).truncate(10)
        node = load_example("node-threefold").scheme
        assert count_points(node, 2) == 10 and count_points(node, 3) == 33
        for q in (2, 3, 5):
            expected = realize_count(1 + L ** -1, q)
            for charts in (ex.left_charts, ex.right_charts):
                assert Fraction(sum(count_points(s, q) for s in charts), q ** 3) == expected, q
        for q in (2, 3, 5):
            assert zeta_closed_form(ex.pair.left.cls, q) == zeta_closed_form(ex.pair.right.cls, q)


def test_criterion_09_measure_zero():
    with criterion(9, "subvariety_vdim_bound(A^2, line, n) = n+1 and truncations vanish, n <= 20", 1.0):
        a2, a1 = affine_space(2), affine_space(1)
        for n in range(21):
            assert subvariety_vdim_bound(a2, 1, n) == n + 1
            mu = cylinder_measure(subvariety_cylinder(a2, a1, n))
            for big_n in range(1, n + 2):
                assert mu.truncate(big_n).is_zero(), (n, big_n)
            assert not mu.truncate(n + 2).is_zero()


def test_criterion_10_ring_properties():
    with criterion(10, "10^4 randomized ring-law and truncation-compatibility checks", 30.0):
        rng = random.Random(20240601)
        laws = ring_laws.LAWS
        for i in range(10_000):
            kind = i % (len(laws) + 2)
            if kind < len(laws):
                x, y, z = (ring_laws.random_class(rng) for _ in range(3))
                assert laws[kind](x, y, z), (laws[kind].__name__, x, y, z)
            elif kind == len(laws):
                r = ring_laws.random_rational(rng)
                assert ring_laws.expansion_nested(r, rng.randint(1, 10), rng.randint(1, 10)), r
            else:
                x, y = ring_laws.random_tate(rng), ring_laws.random_tate(rng)
                assert ring_laws.counting_is_homomorphism(x, y, rng.choice((2, 3, 5, 7)))


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
