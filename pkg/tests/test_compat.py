import numpy as np
import pytest
from hypothesis import given, strategies as st

from jointfold.alignio import PairedAlignment
from jointfold.compat import (CompatibilityMasks, ConstraintSet, FoldParams, Side,
                              apply_constraints, build_masks, load_fold_params, pair_score,
                              parse_constraints, score_masks)
from jointfold.errors import BoundsError, ConstraintError, ParamsError


def _r(*rows):
    return PairedAlignment.from_strings([(x, "A") for x in rows])


@pytest.mark.parametrize("rows,expected", [
    (("GC",), (0.0, 0.0, 0.0)),
    (("GC", "AU"), (1.0, 0.0, 1.0)),
    (("GC", "AG"), (0.0, 0.5, -0.5)),
    (("GC", ".."), (0.0, 0.0, 0.0)),
])
def test_pair_score_hand_examples(rows, expected):
    # exact equality on purpose
    assert pair_score(_r(*rows), Side.R, 1, 2, FoldParams(phi1=1.0)) == expected


def test_pair_score_exterior_and_s_sides():
    pa = PairedAlignment.from_strings([("G", "AC"), ("A", "CU")])
    assert pair_score(pa, Side.Ext, 1, 2) == (1.0, 0.0, 1.0)
    assert pair_score(pa, Side.S, 1, 2) == (0.0, 1.0, -1.0)
    with pytest.raises(BoundsError):
        pair_score(pa, Side.Ext, 1, 3)


col = st.text("ACGU.", min_size=2, max_size=2)


@given(st.lists(col, min_size=1, max_size=6), st.floats(0, 3))
def test_pair_score_properties(rows, phi1):
    pa = _r(*rows)
    c, q, b = pair_score(pa, Side.R, 1, 2, FoldParams(phi1=phi1))
    c2, q2, b2 = pair_score(pa, Side.R, 2, 1, FoldParams(phi1=phi1))
    assert (c, q) == pytest.approx((c2, q2))
    assert c >= 0 and 0 <= q <= 1 and b <= c + 1e-15
    assert pair_score(pa, Side.R, 1, 2, FoldParams(phi1=0.0))[2] == c


@given(st.lists(col, min_size=1, max_size=1))
def test_single_sequence_scores(rows):
    _, _, b = pair_score(_r(*rows), Side.R, 1, 2)
    assert b in (0.0, -1.0)


def test_single_sequence_masks_are_plain_pairing_rules():
    pa = PairedAlignment.from_strings([("GGGAAAACCCU", "UAGC")])
    mk = score_masks(pa)
    seq = "GGGAAAACCCU"
    ok = {"AU", "UA", "GC", "CG", "GU", "UG"}
    for i in range(11):
        for j in range(11):
            assert mk.interior_r[i, j] == (j - i > 3 and seq[i] + seq[j] in ok)
    assert mk.exterior[0, 0] is np.True_ or mk.exterior[0, 0] == (seq[0] + "U" in ok)


def test_two_by_two_masks():
    pa = PairedAlignment.from_strings([("GG", "CC"), ("AA", "UU")])
    mk = build_masks(pa, FoldParams(bstar_ext=0.0), ConstraintSet.empty(2, 2))
    assert mk.exterior.all()
    assert not mk.interior_r.any() and not mk.interior_s.any()


@given(st.lists(st.tuples(st.text("ACGU", min_size=6, max_size=6),
                          st.text("ACGU", min_size=5, max_size=5)), min_size=1, max_size=4),
       st.floats(-1, 1), st.floats(0, 1))
def test_threshold_monotone(rows, lo, step):
    pa = PairedAlignment.from_strings(rows)
    a = score_masks(pa, FoldParams(bstar_r=lo, bstar_s=lo, bstar_ext=lo))
    hi = lo + step
    b = score_masks(pa, FoldParams(bstar_r=hi, bstar_s=hi, bstar_ext=hi))
    for x, y in ((a.interior_r, b.interior_r), (a.interior_s, b.interior_s),
                 (a.exterior, b.exterior)):
        assert not (y & ~x).any()


def test_parse_constraints_examples():
    cs = parse_constraints(".x..", "....")
    assert cs.r_line == ".x.." and not cs.forced_ext
    cs = parse_constraints("[...[", "]..]..")
    assert cs.forced_ext == ((1, 1), (5, 4))
    with pytest.raises(ConstraintError):
        parse_constraints("(...", "....")
    with pytest.raises(ConstraintError):
        parse_constraints("[..", "...")
    # typographic minus is accepted
    assert parse_constraints("−.", "..").r_line == "-."


def test_all_blocked():
    pa = PairedAlignment.from_strings([("GGGAAACCC", "GGGUUU")])
    mk = build_masks(pa, FoldParams(), ConstraintSet("x" * 9, "x" * 6))
    assert not (mk.interior_r.any() or mk.interior_s.any() or mk.exterior.any())


def test_contradictory_forced_pair():
    pa = PairedAlignment.from_strings([("GC", "CG")])
    with pytest.raises(ConstraintError):
        build_masks(pa, FoldParams(), ConstraintSet("x.", "..", forced_ext=((1, 1),)))
    with pytest.raises(ConstraintError):
        build_masks(pa, FoldParams(), ConstraintSet("...", ".."))


def test_symbol_semantics():
    mk = CompatibilityMasks.full(8, 8)
    out = apply_constraints(mk, ConstraintSet("x-^*....", "...x-^*."))
    assert not out.interior_r[0].any() and not out.exterior[0].any()
    assert out.interior_r[1].any() and not out.exterior[1].any()
    assert not out.interior_r[:, 2].any() and not out.interior_r[2].any() and out.exterior[2].any()
    assert out.must_pair_r[3] and not out.must_pair_r[0]
    assert not out.exterior[:, 3].any() and not out.exterior[:, 4].any()
    assert not out.interior_s[5].any() and not out.interior_s[:, 5].any()
    assert out.must_pair_s[6]


def test_forced_pairs_set_only_their_entry():
    mk = CompatibilityMasks.full(10, 6)
    out = apply_constraints(mk, ConstraintSet("." * 10, "." * 6, forced_r=((2, 9),),
                                              forced_ext=((5, 3),)))
    assert out.interior_r[1, 8] and out.interior_r[1].sum() == 1 and out.interior_r[:, 8].sum() == 1
    assert not out.exterior[1].any() and not out.exterior[8].any()
    assert out.exterior[4].sum() == 1 and out.exterior[:, 2].sum() == 1
    assert out.must_pair_r[1] and out.must_pair_s[2]


def test_fold_params_file():
    p = load_fold_params("# comment\nphi1 = 0.5\nmin_hairpin=2\nhairpin_base=4.1\n")
    assert p.phi1 == 0.5 and p.min_hairpin == 2
    with pytest.raises(ParamsError):
        FoldParams(phi1=-1)
