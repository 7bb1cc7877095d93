"""Motivic integrals of ``L^-ord_D`` over SNC models, and the checks built on them.

The integral is computed two independent ways.  The *series* path sums the
contact-order strata level by level::

    sum_s mu(ord_D^-1(s)) L^-s

and the *closed* path sums the geometric series in each contact order
ahead of time::

    L^-d * sum_J [D_J°] prod_{j in J} (L - 1) / (L^(a_j + 1) - 1)

Every :class:`IntegralResult` carries both and they are asserted equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InconsistentTransform, PrecisionTooSmall, UnsupportedCenter
from .geometry import (
    BlowupSpec,
    KEquivalencePairSpec,
    SNCModel,
    motive_class,
    projective_space_class,
    validate_snc,
)
from .jets import ContactDatum, contact_measure
from .motive_ring import (
    CompletedClass,
    RationalClass,
    class_to_json,
    eq_class,
    expand_rational,
    lefschetz,
    rational_to_json,
    zero,
)

__all__ = [
    "IntegralResult",
    "VerificationReport",
    "KEquivalenceReport",
    "level_measure",
    "closed_form",
    "integrate_snc",
    "derive_transform",
    "transform_check",
    "kequiv_check",
]


@dataclass(frozen=True)
class IntegralResult:
    closed: RationalClass
    series: CompletedClass
    level_measures: tuple  # ((s, class), ...) for s = 0..s_max

    @property
    def precision(self) -> int:
        return self.series.precision

    def levels(self) -> dict:
        return dict(self.level_measures)

    def to_json(self) -> dict:
        return {
            "closed": rational_to_json(self.closed),
            "closed_text": str(self.closed),
            "series": class_to_json(self.series),
            "series_text": str(self.series),
            "level_measures": {str(s): class_to_json(c) for s, c in self.level_measures},
        }


def _vectors_with_order(mults, s):
    """Contact vectors ``m`` (all entries >= 1) with ``sum a_j m_j == s``."""
    if not mults:
        if s == 0:
            yield ()
        return
    a, rest = mults[0], mults[1:]
    rest_min = sum(rest)
    m = 1
    while a * m + rest_min <= s:
        for tail in _vectors_with_order(rest, s - a * m):
            yield (m, *tail)
        m += 1


def level_measure(snc: SNCModel, s: int) -> CompletedClass:
    """``mu(ord_D^-1(s))``: exact, a finite sum over contact data of order ``s``."""
    if s < 0:
        raise ValueError(f"order must be >= 0, got {s}")
    mults = snc.multiplicities
    total = zero()
    for subset in snc.all_subsets():
        if snc.stratum(subset).is_zero():
            continue
        for vec in _vectors_with_order([mults[j] for j in subset], s):
            total = total + contact_measure(ContactDatum(snc, subset, vec))
    return total


def closed_form(snc: SNCModel) -> RationalClass:
    """The integral as one fraction over ``prod_j (L^(a_j+1) - 1)``."""
    L = lefschetz()
    mults = snc.multiplicities
    num = zero()
    for subset in snc.all_subsets():
        term = snc.stratum(subset) * (L - 1) ** len(subset)
        for j, a in enumerate(mults):
            if j not in subset:
                term = term * (L ** (a + 1) - 1)
        num = num + term
    return RationalClass(num, -snc.dim, tuple(a + 1 for a in mults))


def _max_level(snc: SNCModel, precision: int) -> int:
    # A contact term on J has weight <= h_J + |J| - d - 1 - s, so it is
    # below the cutoff once s >= precision + h_J + |J| - d - 1.
    slack = 0
    for subset, cls in snc.strata:
        if subset and not cls.is_zero():
            slack = max(slack, cls.weight() + len(subset) - snc.dim)
    return precision + slack


def integrate_snc(snc: SNCModel, precision: int) -> IntegralResult:
    if not isinstance(precision, int) or precision < 1:
        raise PrecisionTooSmall(f"precision must be >= 1, got {precision!r}")
    report = validate_snc(snc)
    if not report.passed:
        raise ValueError(f"invalid SNC model: {report.issues[0]}")
    levels = tuple((s, level_measure(snc, s)) for s in range(_max_level(snc, precision) + 1))
    series = zero(precision=precision)
    for s, mu in levels:
        series = series + mu.shift(-s).truncate(precision)
    closed = closed_form(snc)
    expanded = expand_rational(closed, closed.realization, precision)
    if expanded != series:
        raise AssertionError(f"closed form {closed} expands to {expanded}, series gives {series}")
    return IntegralResult(closed, series, levels)


@dataclass
class VerificationReport:
    passed: bool
    lhs: IntegralResult
    rhs: IntegralResult
    discrepancy: CompletedClass
    precision: int
    issues: list = field(default_factory=list)

    def first_difference(self):
        """Leading ``(monomial, coefficient)`` of the discrepancy, or None."""
        if self.discrepancy.is_zero():
            return None
        return max(self.discrepancy.terms, key=lambda kc: (max(kc[0]), kc[0]))

    def to_json(self) -> dict:
        first = self.first_difference()
        return {
            "passed": self.passed,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "discrepancy": class_to_json(self.discrepancy),
            "first_difference": None if first is None else [*first[0], str(first[1])],
            "precision": self.precision,
            "issues": list(self.issues),
        }


def _compare(lhs: IntegralResult, rhs: IntegralResult, precision: int, issues=None) -> VerificationReport:
    discrepancy = lhs.series - rhs.series
    passed = discrepancy.is_zero() and lhs.closed.equals(rhs.closed)
    return VerificationReport(passed, lhs, rhs, discrepancy, precision, list(issues or []))


def derive_transform(lhs: SNCModel, blowup: BlowupSpec) -> SNCModel:
    """Total transform ``f^-1 D + K_{X'/X}`` for the supported cases.

    * ``D`` empty, any supported center: ``(c - 1) E``.
    * ``D = a H`` with ``H`` a hyperplane through a point center of ``A^d``:
      ``a H~ + (a + d - 1) E``.
    """
    L = lefschetz()
    d = blowup.base.dim
    x_new = blowup.produced
    if not lhs.components:
        return SNCModel(
            x_new,
            (("E", blowup.discrepancy),),
            {(): blowup.base.cls - blowup.center.cls, (0,): blowup.exceptional_class},
        )
    if len(lhs.components) == 1 and blowup.center.kind == "point":
        (name, a), = lhs.components
        if lhs.stratum(()) != L ** d - L ** (d - 1) or lhs.stratum((0,)) != L ** (d - 1):
            raise UnsupportedCenter("the divisor is not a hyperplane of A^d")
        return SNCModel(
            x_new,
            ((f"{name}~", a), ("E", a + d - 1)),
            {
                (): L ** d - L ** (d - 1),
                (0,): L ** (d - 1) - 1,
                (1,): L ** (d - 1),
                (0, 1): projective_space_class(d - 2),
            },
        )
    raise UnsupportedCenter("strict transforms are only derived for D = 0 or a hyperplane through a point")


def _default_pullback(lhs: SNCModel, blowup: BlowupSpec) -> int:
    if not lhs.components:
        return 0
    if len(lhs.components) == 1 and blowup.center.kind == "point":
        return lhs.components[0][1]
    raise InconsistentTransform("cannot infer the multiplicity of f^*D along E; pass pullback_mult")


def transform_check(lhs_snc: SNCModel, blowup: BlowupSpec, rhs_snc: SNCModel, precision: int,
                    pullback_mult: int | None = None) -> VerificationReport:
    """Compare ``int_X L^-ord_D`` with ``int_X' L^-ord(f^-1 D + K_{X'/X})``.

    Broken inputs (class conservation, missing ``E``) raise
    InconsistentTransform.  A wrong multiplicity on ``E`` is a legitimate
    thing to test, so it is noted in ``issues`` and the integrals decide.
    """
    problems = blowup.issues()
    for side, m in (("lhs", lhs_snc), ("rhs", rhs_snc)):
        problems += [f"{side}: {i}" for i in validate_snc(m).issues]
    if lhs_snc.ambient.cls != blowup.base.cls or lhs_snc.dim != blowup.base.dim:
        problems.append("lhs ambient is not the blow-up base")
    if rhs_snc.ambient.cls != blowup.produced.cls or rhs_snc.dim != blowup.produced.dim:
        problems.append(f"rhs ambient class {rhs_snc.ambient.cls} != [X'] = {blowup.produced.cls}")
    try:
        e_index = rhs_snc.component_index("E")
    except KeyError:
        problems.append("rhs has no component named 'E'")
        e_index = None
    if problems:
        raise InconsistentTransform("; ".join(problems))
    if sum((c for j, c in rhs_snc.strata if e_index in j), zero()) != blowup.exceptional_class:
        raise InconsistentTransform("rhs strata on E do not add up to [E]")
    if pullback_mult is None:
        pullback_mult = _default_pullback(lhs_snc, blowup)
    issues = []
    expected = pullback_mult + blowup.discrepancy
    got = rhs_snc.components[e_index][1]
    if got != expected:
        issues.append(f"multiplicity of E is {got}, expected {pullback_mult} + k_E = {expected}")
    return _compare(integrate_snc(lhs_snc, precision), integrate_snc(rhs_snc, precision), precision, issues)


@dataclass
class KEquivalenceReport:
    passed: bool
    verification: VerificationReport
    k_equivalent: bool
    common_class: CompletedClass | None
    motive_checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        doc = self.verification.to_json()
        doc.update(
            passed=self.passed,
            k_equivalent=self.k_equivalent,
            common_class=None if self.common_class is None else class_to_json(self.common_class),
            common_class_text=None if self.common_class is None else str(self.common_class),
            motive_checks=dict(self.motive_checks),
        )
        return doc


def kequiv_check(pair: KEquivalencePairSpec, precision: int) -> KEquivalenceReport:
    """Integrate ``K_{Z/X}`` and ``K_{Z/Y}`` on the common roof and compare.

    When the pair is declared crepant-complete, each integral must also
    equal the realized motive of its own side.
    """
    left = integrate_snc(pair.k_left, precision)
    right = integrate_snc(pair.k_right, precision)
    report = _compare(left, right, precision)
    checks = {}
    if pair.crepant_complete:
        checks["left"] = eq_class(left.series, motive_class(pair.left))
        checks["right"] = eq_class(right.series, motive_class(pair.right))
    passed = report.passed and all(checks.values())
    common = left.series if passed else None
    return KEquivalenceReport(passed, report, pair.k_equivalent, common, checks)

