import pytest

from motint.errors import InputError, NotSmooth, UnsupportedCenter
from motint.geometry import (
    Center,
    SNCModel,
    StratifiedVariety,
    Stratum,
    affine_space,
    blowup_classes,
    center_from_json,
    motive_class,
    projective_space,
    projective_space_class,
    snc_from_json,
    snc_to_json,
    validate_snc,
    variety_from_json,
    variety_to_json,
)
from motint.motive_ring import lefschetz, one, zero

from oracles import brute_count

L = lefschetz()


def axes():
    strata = {(): (L - 1) ** 2, (0,): L - 1, (1,): L - 1, (0, 1): one()}
    return SNCModel(affine_space(2), [("x", 1), ("y", 1)], strata)


class TestValidateSNC:
    def test_axes_pass(self):
        rep = validate_snc(axes())
        assert rep.passed and rep.issues == []

    def test_missing_subset(self):
        m = SNCModel(affine_space(2), [("x", 1), ("y", 1)],
                     {(): (L - 1) ** 2, (0,): L - 1, (1,): L - 1})
        rep = validate_snc(m)
        assert not rep.passed
        assert any("missing subset" in i for i in rep.issues)

    def test_partition_sum(self):
        m = SNCModel(affine_space(2), [("x", 1), ("y", 1)],
                     {(): L ** 2, (0,): L - 1, (1,): L - 1, (0, 1): one()})
        rep = validate_snc(m)
        assert not rep.passed
        assert any("partition sum" in i for i in rep.issues)

    def test_top_weight(self):
        bad = SNCModel(affine_space(2), [("H", 1)], {(): L ** 2 - 1, (0,): one()})
        assert any("top weight" in i for i in validate_snc(bad).issues)

    def test_multiplicity(self):
        m = SNCModel(affine_space(1), [("p", 0)], {(): L - 1, (0,): one()})
        assert any("multiplicity" in i for i in validate_snc(m).issues)

    def test_singular_ambient(self):
        node = StratifiedVariety("node", 3, False, (Stratum("all", 3, L ** 3 + L ** 2 - L),))
        assert any("smooth" in i for i in validate_snc(SNCModel.empty_divisor(node)).issues)

    def test_empty_divisor(self):
        m = SNCModel.empty_divisor(projective_space(2))
        assert validate_snc(m).passed
        assert m.stratum(()) == 1 + L + L ** 2


class TestVarieties:
    def test_projective_space(self):
        assert projective_space(3).cls == projective_space_class(3) == 1 + L + L ** 2 + L ** 3
        assert projective_space_class(-1) == zero()

    def test_motive_class(self):
        assert motive_class(affine_space(4)) == one()
        assert motive_class(projective_space(1)) == 1 + L ** -1
        node = StratifiedVariety("node", 3, False, (Stratum("all", 3, L ** 3 + L ** 2 - L),))
        with pytest.raises(NotSmooth):
            motive_class(node)

    def test_stratum_issues(self):
        assert Stratum("pt", 0, one()).issues() == []
        assert Stratum("empty", -1, zero()).issues() == []
        assert Stratum("bad", 1, one()).issues()
        assert Stratum("zero", 1, zero()).issues()

    def test_variety_json_roundtrip(self):
        x = projective_space(2)
        assert variety_from_json(variety_to_json(x)) == x


# Chart equations for the blow-up of A^d along {x_0 = .. = x_(c-1) = 0}, written
# out by hand in the oracle's [(coeff, exps)] format.  Variables: x_0..x_(d-1), v_0..v_(c-1).
def _var(i, n, coeff=1):
    return (coeff, tuple(1 if j == i else 0 for j in range(n)))


def _prod(i, j, n, coeff=1):
    return (coeff, tuple((1 if k == i else 0) + (1 if k == j else 0) for k in range(n)))


def hand_charts(d, c):
    n = d + c
    pieces = []
    for i in range(c):
        eqs = [[_var(d + i, n), (-1, (0,) * n)]]
        eqs += [[_var(d + j, n)] for j in range(i)]
        eqs += [[_var(j, n), _prod(i, d + j, n, -1)] for j in range(c) if j != i]
        pieces.append((n, eqs))
    return pieces


def chart_count(d, c, q, exceptional=False):
    total = 0
    for n, eqs in hand_charts(d, c):
        extra = []
        if exceptional:
            # on the chart v_i = 1 the exceptional divisor is x_i = 0
            i = next(k for k in range(c) if eqs[0][0][1][d + k])
            extra = [[_var(i, n)]]
        total += brute_count(n, eqs + extra, q)
    return total


class TestBlowup:
    @pytest.mark.parametrize("d,z,x_new,e_cls", [
        (2, 0, L ** 2 + L, L + 1),
        (3, 0, L ** 3 + L ** 2 + L, L ** 2 + L + 1),
        (3, 1, L ** 3 + L ** 2, L ** 2 + L),
    ])
    def test_classes(self, d, z, x_new, e_cls):
        center = Center("point") if z == 0 else Center("coordinate_subspace", z)
        b = blowup_classes(affine_space(d), center)
        assert b.produced.cls == x_new
        assert b.exceptional_class == e_cls
        assert b.discrepancy == d - z - 1
        assert b.issues() == []

    @pytest.mark.parametrize("d,z", [(2, 0), (3, 0), (3, 1)])
    @pytest.mark.parametrize("q", [2, 3])
    def test_classes_match_chart_counts(self, d, z, q):
        center = Center("point") if z == 0 else Center("coordinate_subspace", z)
        b = blowup_classes(affine_space(d), center)
        assert chart_count(d, d - z, q) == b.produced.cls.evaluate(q)
        assert chart_count(d, d - z, q, exceptional=True) == b.exceptional_class.evaluate(q)

    def test_unsupported(self):
        with pytest.raises(UnsupportedCenter):
            blowup_classes(affine_space(2), Center("coordinate_subspace", 1))
        with pytest.raises(UnsupportedCenter):
            blowup_classes(affine_space(2), Center("curve"))
        with pytest.raises(UnsupportedCenter):
            blowup_classes(projective_space(2), Center("point"))

    def test_center_mapping(self):
        b = blowup_classes(affine_space(3), {"kind": "coordinate_subspace", "dim": 1})
        assert b.codim == 2

    def test_center_json_errors(self):
        with pytest.raises(InputError):
            center_from_json({"kind": "point", "dim": "0"}, "$.center")


class TestSNCJson:
    def test_roundtrip(self):
        m = axes()
        assert snc_from_json(snc_to_json(m)) == m

    def test_empty_key(self):
        doc = snc_to_json(axes())
        assert "∅" in doc["strata"]

    def test_invalid_model_rejected_with_path(self):
        doc = snc_to_json(axes())
        del doc["strata"]["0,1"]
        with pytest.raises(InputError) as info:
            snc_from_json(doc, "$.snc")
        assert info.value.path.startswith("$.snc")
