"""Jet-space classes and measures of cylinders and contact loci.

Measures are normalized so that the whole arc space of a smooth ``X`` of
dimension ``d`` has measure ``[X] * L^-d``: a cylinder cut out at level
``m`` by a constructible ``A_m`` in ``J_m(X)`` has measure
``[A_m] * L^-((m+1)d)``.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .errors import BadCodim, DivergentFamily, InvalidContact, NotSmooth
from .geometry import SNCModel, StratifiedVariety
from .motive_ring import CompletedClass, lefschetz, zero

__all__ = [
    "JetCylinder",
    "ContactDatum",
    "DEFAULT_MAX_TERMS",
    "jet_space_class",
    "cylinder_measure",
    "contact_measure",
    "measure_disjoint_union",
    "subvariety_vdim_bound",
    "subvariety_cylinder",
    "contact_bound",
    "contact_vectors",
    "enumerate_contact_data",
]

DEFAULT_MAX_TERMS = 10**6


def _require_smooth(x: StratifiedVariety):
    if not x.smooth:
        raise NotSmooth(f"{x.name!r} is not declared smooth")


@dataclass(frozen=True)
class JetCylinder:
    """``pi_m^-1(A_m)`` for a constructible ``A_m`` with class ``base_class``."""

    ambient: StratifiedVariety
    level: int
    base_class: CompletedClass

    def issues(self) -> list[str]:
        out = []
        if self.level < 0:
            out.append(f"level {self.level} must be >= 0")
        bound = 2 * (self.level + 1) * self.ambient.dim
        tw = self.base_class.top_weight()
        if tw is not None and tw > bound:
            out.append(f"top weight {tw} of A_m exceeds 2(m+1)d = {bound}")
        return out


@dataclass(frozen=True)
class ContactDatum:
    """Arcs meeting exactly the components in ``subset`` with the given contact orders.

    ``contact`` is aligned with ``subset``: ``contact[i]`` is the order of
    contact with component ``subset[i]``.
    """

    snc: SNCModel
    subset: tuple = ()
    contact: tuple = ()

    def __post_init__(self):
        subset = tuple(self.subset)
        contact = tuple(self.contact)
        if len(subset) != len(contact):
            raise InvalidContact("subset and contact orders must have the same length")
        order = sorted(range(len(subset)), key=lambda i: subset[i])
        object.__setattr__(self, "subset", tuple(subset[i] for i in order))
        object.__setattr__(self, "contact", tuple(contact[i] for i in order))

    @classmethod
    def from_vector(cls, snc: SNCModel, vector: Sequence[int]) -> ContactDatum:
        """Build from a full contact vector; zero entries are components the arc misses."""
        if len(vector) != len(snc.components):
            raise InvalidContact(f"contact vector {list(vector)} has the wrong length")
        if any(v < 0 for v in vector):
            raise InvalidContact(f"contact orders must be >= 0, got {list(vector)}")
        subset = tuple(i for i, v in enumerate(vector) if v)
        return cls(snc, subset, tuple(vector[i] for i in subset))

    def vector(self) -> tuple:
        v = [0] * len(self.snc.components)
        for j, m in zip(self.subset, self.contact):
            v[j] = m
        return tuple(v)

    def order(self) -> int:
        """Value of ``ord_D`` on these arcs: ``sum a_j m_j``."""
        mults = self.snc.multiplicities
        return sum(mults[j] * m for j, m in zip(self.subset, self.contact))


def jet_space_class(x: StratifiedVariety, m: int) -> CompletedClass:
    """``[J_m(X)] = [X] * L^(md)``: an ``A^(dm)``-bundle over smooth ``X``."""
    _require_smooth(x)
    if m < 0:
        raise ValueError(f"jet level must be >= 0, got {m}")
    return x.cls.shift(m * x.dim)


def cylinder_measure(c: JetCylinder) -> CompletedClass:
    problems = c.issues()
    if problems:
        raise ValueError(problems[0])
    return c.base_class.shift(-(c.level + 1) * c.ambient.dim)


def contact_measure(cd: ContactDatum) -> CompletedClass:
    """``[D_J°] (L-1)^|J| L^(-sum m_j - d)``."""
    if any(m < 1 for m in cd.contact):
        raise InvalidContact(f"contact orders must be >= 1, got {list(cd.contact)}")
    L = lefschetz()
    base = cd.snc.stratum(cd.subset)
    return (base * (L - 1) ** len(cd.subset)).shift(-sum(cd.contact) - cd.snc.dim)


def measure_disjoint_union(parts: Iterable[CompletedClass], precision: int,
                           max_terms: int = DEFAULT_MAX_TERMS) -> CompletedClass:
    """Truncated measure of a finite or countable disjoint union.

    A list or tuple is summed in full.  Any other iterable is treated as a
    countable family whose virtual dimensions are nondecreasing once they
    reach ``precision``: enumeration stops at the first part with
    ``vdim >= precision``, since it and everything after it vanish in the
    truncation.  At most ``max_terms`` parts may lie above the cutoff.
    """
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    finite = isinstance(parts, Sequence)
    total = None
    live = 0
    for part in parts:
        if part.vdim() < precision:
            live += 1
            if live > max_terms:
                raise DivergentFamily(f"more than {max_terms} parts above precision {precision}")
        elif not finite:
            break
        total = part.truncate(precision) if total is None else total + part.truncate(precision)
    if total is None:
        return zero(precision=precision)
    return total.truncate(precision)


def subvariety_vdim_bound(x: StratifiedVariety, y_dim: int, n: int) -> int:
    """Lower bound ``(n+1)c`` on ``vdim`` of the level-``n`` cylinder over ``J_n(Y)``.

    ``c = d - dim Y``.  Since the bound grows without limit, the arcs lying in
    ``Y`` have measure zero in every truncation.
    """
    _require_smooth(x)
    if y_dim >= x.dim:
        raise BadCodim(f"subvariety of dim {y_dim} has no positive codimension in dim {x.dim}")
    if y_dim < 0:
        raise BadCodim(f"subvariety dim must be >= 0, got {y_dim}")
    if n < 0:
        raise ValueError(f"level must be >= 0, got {n}")
    return (n + 1) * (x.dim - y_dim)


def subvariety_cylinder(x: StratifiedVariety, y: StratifiedVariety, n: int) -> JetCylinder:
    """The cylinder ``pi_n^-1 J_n(Y)`` for a smooth closed ``Y`` in ``X``."""
    return JetCylinder(x, n, jet_space_class(y, n))


def contact_bound(snc: SNCModel, precision: int) -> int:
    """Cap on ``sum (a_j + 1) m_j`` beyond which every term is below the cutoff."""
    tops = [c.top_weight() for _, c in snc.strata if not c.is_zero()]
    return 2 * precision + 2 * snc.dim + max(tops, default=0)


def contact_vectors(weights: Sequence[int], bound: int):
    """All ``m`` with every ``m_j >= 1`` and ``sum w_j m_j <= bound``, in lexicographic order."""
    if not weights:
        yield ()
        return
    w, rest = weights[0], weights[1:]
    rest_min = sum(rest)
    m = 1
    while w * m + rest_min <= bound:
        for tail in contact_vectors(rest, bound - w * m):
            yield (m, *tail)
        m += 1


def enumerate_contact_data(snc: SNCModel, precision: int):
    """Every contact datum whose measure can survive truncation at ``precision``.

    Sorted by subset, then contact vector, so reductions are deterministic.
    """
    bound = contact_bound(snc, precision)
    mults = snc.multiplicities
    for subset in snc.all_subsets():
        if snc.stratum(subset).is_zero():
            continue
        weights = [mults[j] + 1 for j in subset]
        for vec in contact_vectors(weights, bound):
            yield ContactDatum(snc, subset, vec)
