"""Declarative stratified varieties, SNC divisors, blow-ups and K-equivalence pairs.

Nothing here does scheme theory.  Strata and their classes are declared by
the user and only the combinatorial invariants (class partitions, top
weights, multiplicities) are checked.  Value objects do not validate
themselves on construction so that broken models can still be inspected;
call ``issues()`` or :func:`validate_snc`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from .errors import InputError, NotSmooth, UnsupportedCenter
from .motive_ring import (
    HODGE,
    CompletedClass,
    class_from_json,
    class_to_json,
    lefschetz,
    tate,
    zero,
)

__all__ = [
    "Stratum",
    "StratifiedVariety",
    "SNCModel",
    "ValidationReport",
    "Center",
    "BlowupSpec",
    "KEquivalencePairSpec",
    "affine_space",
    "projective_space",
    "projective_space_class",
    "validate_snc",
    "blowup_classes",
    "motive_class",
    "variety_to_json",
    "variety_from_json",
    "snc_to_json",
    "snc_from_json",
    "center_to_json",
    "center_from_json",
    "kequiv_to_json",
    "kequiv_from_json",
]

EMPTY_KEY = "∅"


def projective_space_class(n: int) -> CompletedClass:
    """``[P^n] = 1 + L + ... + L^n`` (zero for n < 0)."""
    return tate([1] * (n + 1)) if n >= 0 else zero()


@dataclass(frozen=True)
class Stratum:
    name: str
    dim: int
    cls: CompletedClass

    def issues(self) -> list[str]:
        out = []
        if self.cls.realization != HODGE or not self.cls.is_exact:
            out.append(f"stratum {self.name!r}: class must be an exact Hodge-Deligne class")
            return out
        if self.dim == -1:
            if not self.cls.is_zero():
                out.append(f"stratum {self.name!r}: empty stratum (dim -1) must have class 0")
        elif self.dim < 0:
            out.append(f"stratum {self.name!r}: dim must be >= 0 or -1 for an empty stratum")
        elif self.cls.is_zero():
            out.append(f"stratum {self.name!r}: non-empty stratum has class 0")
        elif self.cls.top_weight() != 2 * self.dim:
            out.append(
                f"stratum {self.name!r}: top weight {self.cls.top_weight()} != 2*dim = {2 * self.dim}"
            )
        return out


@dataclass(frozen=True)
class StratifiedVariety:
    """A variety given as a finite disjoint union of declared strata."""

    name: str
    dim: int
    smooth: bool
    strata: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "strata", tuple(self.strata))

    @property
    def cls(self) -> CompletedClass:
        total = zero()
        for s in self.strata:
            total = total + s.cls
        return total

    def issues(self) -> list[str]:
        out = []
        for s in self.strata:
            out.extend(s.issues())
            if s.dim > self.dim:
                out.append(f"stratum {s.name!r}: dim {s.dim} exceeds variety dim {self.dim}")
        if not any(s.dim == self.dim for s in self.strata):
            out.append(f"variety {self.name!r}: no stratum of top dimension {self.dim}")
        return out


def affine_space(d: int) -> StratifiedVariety:
    return StratifiedVariety(f"A{d}", d, True, (Stratum(f"A{d}", d, lefschetz(HODGE, d)),))


def projective_space(n: int) -> StratifiedVariety:
    """``P^n`` stratified into its affine cells ``A^n, A^(n-1), ..., A^0``."""
    cells = tuple(Stratum(f"A{k}", k, lefschetz(HODGE, k)) for k in range(n, -1, -1))
    return StratifiedVariety(f"P{n}", n, True, cells)


def motive_class(x: StratifiedVariety) -> CompletedClass:
    """Realized motive ``[X] * L^-d`` of a smooth variety."""
    if not x.smooth:
        raise NotSmooth(f"{x.name!r} is not declared smooth")
    return x.cls.shift(-x.dim)


def _subset_key(subset) -> tuple:
    return tuple(sorted(subset))


@dataclass(frozen=True)
class SNCModel:
    """An SNC divisor ``sum a_i D_i`` on a smooth ambient variety.

    ``strata`` maps each subset ``J`` of component indices to the class of
    the open stratum of points lying on exactly the components in ``J``;
    the empty subset is the complement of the divisor.
    """

    ambient: StratifiedVariety
    components: tuple = ()
    strata: tuple = ()

    def __post_init__(self):
        comps = tuple((str(name), int(mult)) for name, mult in self.components)
        items = self.strata.items() if isinstance(self.strata, Mapping) else self.strata
        strata = tuple(sorted((_subset_key(j), c) for j, c in items))
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "strata", strata)

    @classmethod
    def empty_divisor(cls, x: StratifiedVariety) -> SNCModel:
        return cls(x, (), {(): x.cls})

    @property
    def dim(self) -> int:
        return self.ambient.dim

    @property
    def multiplicities(self) -> tuple:
        return tuple(m for _, m in self.components)

    def stratum(self, subset) -> CompletedClass:
        key = _subset_key(subset)
        for j, c in self.strata:
            if j == key:
                return c
        raise KeyError(key)

    def component_index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.components):
            if n == name:
                return i
        raise KeyError(name)

    def all_subsets(self):
        idx = range(len(self.components))
        for r in range(len(self.components) + 1):
            yield from combinations(idx, r)

    def issues(self) -> list[str]:
        return validate_snc(self).issues


@dataclass
class ValidationReport:
    passed: bool
    issues: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"passed": self.passed, "issues": list(self.issues)}


def validate_snc(m: SNCModel) -> ValidationReport:
    issues = list(m.ambient.issues())
    if not m.ambient.smooth:
        issues.append(f"ambient {m.ambient.name!r} must be smooth")
    n = len(m.components)
    names = [name for name, _ in m.components]
    if len(set(names)) != len(names):
        issues.append("component names must be distinct")
    for name, mult in m.components:
        if mult < 1:
            issues.append(f"component {name!r}: multiplicity {mult} must be >= 1")
    declared = dict(m.strata)
    for j in declared:
        if any(i < 0 or i >= n for i in j) or len(set(j)) != len(j):
            issues.append(f"stratum key {list(j)} is not a subset of the component indices 0..{n - 1}")
    for j in m.all_subsets():
        if j not in declared:
            issues.append(f"missing subset entry {_format_subset(j)}")
    for j, c in declared.items():
        if c.realization != HODGE or not c.is_exact:
            issues.append(f"stratum {_format_subset(j)}: class must be an exact Hodge-Deligne class")
            continue
        if not c.is_zero() and c.top_weight() != 2 * (m.dim - len(j)):
            issues.append(
                f"stratum {_format_subset(j)}: top weight {c.top_weight()} != 2(d - |J|) = {2 * (m.dim - len(j))}"
            )
    total = zero()
    for c in declared.values():
        if c.realization == HODGE:
            total = total + c
    if total != m.ambient.cls:
        issues.append(f"partition sum {total} != [X] = {m.ambient.cls}")
    return ValidationReport(not issues, issues)


def _format_subset(j) -> str:
    return "{" + ",".join(str(i) for i in j) + "}" if j else EMPTY_KEY


@dataclass(frozen=True)
class Center:
    """A blow-up center: a point or a coordinate linear subspace of ``A^d``."""

    kind: str
    dim: int = 0

    @property
    def cls(self) -> CompletedClass:
        return lefschetz(HODGE, self.dim)


@dataclass(frozen=True)
class BlowupSpec:
    base: StratifiedVariety
    center: Center
    codim: int
    produced: StratifiedVariety
    exceptional_class: CompletedClass
    discrepancy: int

    def issues(self) -> list[str]:
        out = []
        c = self.codim
        if c != self.base.dim - self.center.dim:
            out.append(f"codim {c} != d - z = {self.base.dim - self.center.dim}")
        if c < 2:
            out.append(f"codim {c} must be >= 2")
        p = projective_space_class(c - 1)
        z = self.center.cls
        if self.exceptional_class != z * p:
            out.append(f"[E] = {self.exceptional_class} != [Z][P^{c - 1}] = {z * p}")
        expected = self.base.cls - z + z * p
        if self.produced.cls != expected:
            out.append(f"[X'] = {self.produced.cls} != [X] - [Z] + [Z][P^{c - 1}] = {expected}")
        if self.discrepancy != c - 1:
            out.append(f"discrepancy k_E = {self.discrepancy} != c - 1 = {c - 1}")
        return out


def blowup_classes(base: StratifiedVariety, center: Center | Mapping) -> BlowupSpec:
    """Classes of the blow-up of ``A^d`` along a point or coordinate subspace."""
    if isinstance(center, Mapping):
        center = center_from_json(center)
    if not base.smooth:
        raise NotSmooth(f"{base.name!r} is not declared smooth")
    d = base.dim
    if base.cls != lefschetz(HODGE, d):
        raise UnsupportedCenter(f"blow-ups are only derived on affine space; [X] = {base.cls}")
    if center.kind == "point":
        if center.dim != 0:
            raise UnsupportedCenter("a point center has dim 0")
    elif center.kind != "coordinate_subspace":
        raise UnsupportedCenter(f"unsupported center kind {center.kind!r}")
    z = center.dim
    c = d - z
    if z < 0 or c < 2:
        raise UnsupportedCenter(f"center of dim {z} in A^{d} has codimension {c} < 2")
    zc = center.cls
    e_cls = zc * projective_space_class(c - 1)
    produced = StratifiedVariety(
        f"Bl({base.name})",
        d,
        True,
        (
            Stratum("complement", d, base.cls - zc),
            Stratum("E", d - 1, e_cls),
        ),
    )
    return BlowupSpec(base, center, c, produced, e_cls, c - 1)


@dataclass(frozen=True)
class KEquivalencePairSpec:
    left: StratifiedVariety
    right: StratifiedVariety
    resolution: StratifiedVariety
    k_left: SNCModel
    k_right: SNCModel
    crepant_complete: bool = False

    @property
    def k_equivalent(self) -> bool:
        """True iff ``K_{Z/X}`` and ``K_{Z/Y}`` agree component by component."""
        return (
            self.k_left.ambient == self.k_right.ambient
            and self.k_left.components == self.k_right.components
            and self.k_left.strata == self.k_right.strata
        )

    def issues(self) -> list[str]:
        out = []
        if not self.resolution.smooth:
            out.append("resolution must be smooth")
        if self.k_left.ambient != self.resolution:
            out.append("k_left is not a divisor on the resolution")
        if self.k_right.ambient != self.resolution:
            out.append("k_right is not a divisor on the resolution")
        out.extend(f"k_left: {i}" for i in validate_snc(self.k_left).issues)
        out.extend(f"k_right: {i}" for i in validate_snc(self.k_right).issues)
        return out


# -- JSON -------------------------------------------------------------------

def _require(doc, key, kind, path):
    if key not in doc:
        raise InputError(f"missing field {key!r}", path)
    value = doc[key]
    ok = isinstance(value, kind) and not (kind is int and isinstance(value, bool))
    if not ok:
        raise InputError(f"field {key!r} has the wrong type", f"{path}.{key}")
    return value


def _check_keys(doc, allowed, path):
    extra = set(doc) - set(allowed)
    if extra:
        raise InputError(f"unexpected fields {sorted(extra)}", path)


def variety_to_json(x: StratifiedVariety) -> dict:
    return {
        "name": x.name,
        "dim": x.dim,
        "smooth": x.smooth,
        "strata": [{"name": s.name, "dim": s.dim, "class": class_to_json(s.cls)} for s in x.strata],
    }


def variety_from_json(doc, path: str = "$", validate: bool = True) -> StratifiedVariety:
    if not isinstance(doc, dict):
        raise InputError("variety must be a JSON object", path)
    _check_keys(doc, {"name", "dim", "smooth", "strata"}, path)
    name = _require(doc, "name", str, path)
    dim = _require(doc, "dim", int, path)
    smooth = _require(doc, "smooth", bool, path)
    raw = _require(doc, "strata", list, path)
    strata = []
    for i, s in enumerate(raw):
        where = f"{path}.strata[{i}]"
        if not isinstance(s, dict):
            raise InputError("stratum must be a JSON object", where)
        _check_keys(s, {"name", "dim", "class"}, where)
        stratum = Stratum(
            _require(s, "name", str, where),
            _require(s, "dim", int, where),
            class_from_json(_require(s, "class", dict, where), f"{where}.class"),
        )
        if validate and stratum.issues():
            raise InputError(stratum.issues()[0], where)
        strata.append(stratum)
    x = StratifiedVariety(name, dim, smooth, tuple(strata))
    if validate and x.issues():
        raise InputError(x.issues()[0], path)
    return x


def _subset_to_key(j) -> str:
    return ",".join(str(i) for i in j) if j else EMPTY_KEY


def _key_to_subset(key: str, path: str) -> tuple:
    if key == EMPTY_KEY:
        return ()
    try:
        subset = tuple(int(p) for p in key.split(","))
    except ValueError:
        raise InputError(f"stratum key {key!r} is not a comma-joined index list", path) from None
    if list(subset) != sorted(set(subset)):
        raise InputError(f"stratum key {key!r} must list distinct indices in increasing order", path)
    return subset


def snc_to_json(m: SNCModel) -> dict:
    return {
        "ambient": variety_to_json(m.ambient),
        "components": [{"name": n, "mult": a} for n, a in m.components],
        "strata": {_subset_to_key(j): class_to_json(c) for j, c in m.strata},
    }


def snc_from_json(doc, path: str = "$", validate: bool = True) -> SNCModel:
    if not isinstance(doc, dict):
        raise InputError("SNC model must be a JSON object", path)
    _check_keys(doc, {"ambient", "components", "strata"}, path)
    ambient = variety_from_json(_require(doc, "ambient", dict, path), f"{path}.ambient", validate)
    comps = []
    for i, c in enumerate(_require(doc, "components", list, path)):
        where = f"{path}.components[{i}]"
        if not isinstance(c, dict):
            raise InputError("component must be a JSON object", where)
        _check_keys(c, {"name", "mult"}, where)
        comps.append((_require(c, "name", str, where), _require(c, "mult", int, where)))
    strata = {}
    for key, cdoc in _require(doc, "strata", dict, path).items():
        where = f"{path}.strata[{key!r}]"
        strata[_key_to_subset(key, where)] = class_from_json(cdoc, where)
    m = SNCModel(ambient, tuple(comps), strata)
    if validate:
        report = validate_snc(m)
        if not report.passed:
            raise InputError(report.issues[0], path)
    return m


def center_to_json(c: Center) -> dict:
    return {"kind": c.kind, "dim": c.dim}


def center_from_json(doc, path: str = "$") -> Center:
    if not isinstance(doc, Mapping):
        raise InputError("center must be a JSON object", path)
    _check_keys(doc, {"kind", "dim"}, path)
    kind = _require(doc, "kind", str, path)
    dim = doc.get("dim", 0)
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise InputError("center dim must be an integer", f"{path}.dim")
    return Center(kind, dim)


def kequiv_to_json(p: KEquivalencePairSpec) -> dict:
    return {
        "left": variety_to_json(p.left),
        "right": variety_to_json(p.right),
        "resolution": variety_to_json(p.resolution),
        "k_left": snc_to_json(p.k_left),
        "k_right": snc_to_json(p.k_right),
        "crepant_complete": p.crepant_complete,
    }


def kequiv_from_json(doc, path: str = "$") -> KEquivalencePairSpec:
    if not isinstance(doc, dict):
        raise InputError("K-equivalence pair must be a JSON object", path)
    _check_keys(doc, {"left", "right", "resolution", "k_left", "k_right", "crepant_complete"}, path)
    pair = KEquivalencePairSpec(
        variety_from_json(_require(doc, "left", dict, path), f"{path}.left"),
        variety_from_json(_require(doc, "right", dict, path), f"{path}.right"),
        variety_from_json(_require(doc, "resolution", dict, path), f"{path}.resolution"),
        snc_from_json(_require(doc, "k_left", dict, path), f"{path}.k_left"),
        snc_from_json(_require(doc, "k_right", dict, path), f"{path}.k_right"),
        _require(doc, "crepant_complete", bool, path),
    )
    problems = pair.issues()
    if problems:
        raise InputError(problems[0], path)
    return pair

