"""Regenerate the bundled example documents under src/motint/data/.

Run from the repository root:  python scripts/build_examples.py
"""
from pathlib import Path

from motint.corpus import (
    KEquivExample,
    SchemeExample,
    SNCExample,
    TransformExample,
    canonical_dumps,
)
from motint.counting_oracle import AffineSchemeSpec, variables
from motint.geometry import (
    Center,
    KEquivalencePairSpec,
    SNCModel,
    StratifiedVariety,
    Stratum,
    affine_space,
    blowup_classes,
)
from motint.integrator import derive_transform
from motint.motive_ring import lefschetz, one

OUT = Path(__file__).resolve().parents[1] / "src" / "motint" / "data"
L = lefschetz()


def a1_divisor(a):
    snc = SNCModel(affine_space(1), [("origin", a)], {(): L - 1, (0,): one()})
    (x,) = variables(1)
    return SNCExample(f"a1-divisor-a{a}", f"A^1 with the divisor {a}*{{0}}", snc, 1, ((x, a),))


def a2_axes():
    snc = SNCModel(
        affine_space(2),
        [("x=0", 1), ("y=0", 1)],
        {(): (L - 1) ** 2, (0,): L - 1, (1,): L - 1, (0, 1): one()},
    )
    x, y = variables(2)
    return SNCExample("a2-axes", "A^2 with the reduced coordinate axes xy = 0", snc, 2, ((x, 1), (y, 1)))


def blowup_example(ident, d, center, desc, rhs=None):
    base = affine_space(d)
    lhs = SNCModel.empty_divisor(base)
    b = blowup_classes(base, center)
    rhs = rhs or derive_transform(lhs, b)
    return TransformExample(ident, desc, lhs, center, rhs, 0)


def hyperplane_example(a):
    base = affine_space(2)
    lhs = SNCModel(base, [("H", a)], {(): L ** 2 - L, (0,): L})
    b = blowup_classes(base, Center("point"))
    return TransformExample(
        f"bl-a2-hyperplane-a{a}",
        f"blow-up of A^2 at the origin, D = {a}*H for a line H through the origin",
        lhs, Center("point"), derive_transform(lhs, b), a,
    )


def wrong_discrepancy():
    b = blowup_classes(affine_space(2), Center("point"))
    rhs = SNCModel(b.produced, [("E", 2)], {(): L ** 2 - 1, (0,): L + 1})
    return blowup_example("bl-a2-wrong-discrepancy", 2, Center("point"),
                          "blow-up of A^2 at the origin with the wrong discrepancy 2E", rhs)


def node_variety():
    return StratifiedVariety("node", 3, False, (
        Stratum("smooth part", 3, L ** 3 + L ** 2 - L - 1),
        Stratum("vertex", 0, one()),
    ))


def atiyah_flop():
    def small(name):
        return StratifiedVariety(name, 3, True, (
            Stratum("off the curve", 3, L ** 3 + L ** 2 - L - 1),
            Stratum("exceptional P1", 1, L + 1),
        ))

    left, right = small("X+"), small("X-")
    roof = StratifiedVariety("Z", 3, True, (
        Stratum("off E", 3, L ** 3 + L ** 2 - L - 1),
        Stratum("E = P1 x P1", 2, (L + 1) ** 2),
    ))
    k = SNCModel(roof, [("E", 1)], {(): L ** 3 + L ** 2 - L - 1, (0,): (L + 1) ** 2})
    pair = KEquivalencePairSpec(left, right, roof, k, k, True)

    # (x, y, z, w, lam, mu) with xy = zw and [lam : mu] in P^1, split as mu = 1 or (lam, mu) = (1, 0)
    x, y, z, w, lam, mu = variables(6)
    node = x * y - z * w

    def charts(p1, p2):
        return (
            AffineSchemeSpec(6, (node, mu - 1, p1, p2)),
            AffineSchemeSpec(6, (node, lam - 1, mu, p1, p2)),
        )

    plus = charts(x * mu - z * lam, w * mu - y * lam)
    minus = charts(x * mu - w * lam, z * mu - y * lam)
    return KEquivExample(
        "atiyah-flop",
        "the two small resolutions of xy = zw, joined by the blow-up of the vertex",
        pair, plus, minus,
    )


def a2_vs_blowup():
    base = affine_space(2)
    b = blowup_classes(base, Center("point"))
    roof = b.produced
    k_left = SNCModel(roof, [("E", 1)], {(): L ** 2 - 1, (0,): L + 1})
    pair = KEquivalencePairSpec(base, roof, roof, k_left, SNCModel.empty_divisor(roof), True)
    return KEquivExample("a2-vs-blowup", "A^2 against its blow-up at a point: not K-equivalent", pair)


def node_threefold():
    x, y, z, w = variables(4)
    return SchemeExample("node-threefold", "the 3-fold node xy = zw in A^4",
                         AffineSchemeSpec(4, (x * y - z * w,)), node_variety())


def hyperbola_jets():
    x, y = variables(2)
    hyperbola = StratifiedVariety("hyperbola", 1, True, (Stratum("xy=1", 1, L - 1),))
    return SchemeExample("hyperbola-jets", "the hyperbola xy = 1, a smooth curve isomorphic to G_m",
                         AffineSchemeSpec(2, (x * y - 1,)), hyperbola)


def all_examples():
    return [
        a1_divisor(1), a1_divisor(2), a1_divisor(3), a2_axes(),
        blowup_example("bl-a2-origin", 2, Center("point"), "blow-up of A^2 at the origin, D = 0"),
        blowup_example("bl-a3-origin", 3, Center("point"), "blow-up of A^3 at the origin, D = 0"),
        blowup_example("bl-a3-line", 3, Center("coordinate_subspace", 1),
                       "blow-up of A^3 along the line x = y = 0, D = 0"),
        wrong_discrepancy(), hyperplane_example(1), hyperplane_example(2),
        atiyah_flop(), a2_vs_blowup(), node_threefold(), hyperbola_jets(),
    ]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for ex in all_examples():
        (OUT / f"{ex.id}.json").write_text(canonical_dumps(ex.to_json()), encoding="utf-8", newline="\n")
        print("wrote", ex.id)


if __name__ == "__main__":
    main()
