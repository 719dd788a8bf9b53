"""Translation, truncation, clamping, scaling."""
import math
from fractions import Fraction as F

import numpy as np
import pytest

import asymlp as a


class TestTranslate:
    def test_exact_shift(self):
        g = a.family_g(3)  # indicator of [3, 4]
        moved = a.translate(g, F(1, 2))
        assert moved.value_at(2.75) == 1.0
        assert moved.value_at(3.75) == 0.0
        assert moved.box[0] == (F(5, 2), F(7, 2))

    def test_shift_preserves_norm(self):
        f = a.family_u(4, 1.0)
        moved = a.translate(f, F(-3, 2))
        assert a.alpha_norm(moved, 1.0) == a.alpha_norm(f, 1.0)

    def test_misaligned_shift_carries_suggestion(self):
        g = a.family_g(2)  # spacing 1/16
        with pytest.raises(a.MisalignedShiftError) as err:
            a.translate(g, F(1, 24))
        assert err.value.suggestion is not None

    def test_power_tail_cannot_translate(self):
        v = a.family_v(4, 2.0)
        with pytest.raises(a.GridError):
            a.translate(v, F(1, 1024))

    def test_round_trip(self):
        f = a.family_f(5, 2.0)
        back = a.translate(a.translate(f, F(3, 16)), F(-3, 16))
        assert back.box == f.box
        assert np.array_equal(back.values, f.values)

    def test_2d_translate(self):
        f = a.grid_function(((F(0), F(1)), (F(0), F(1))), (F(1, 2), F(1, 2)),
                            np.arange(4.0).reshape(2, 2))
        moved = a.translate(f, (F(1, 2), F(-1, 2)))
        assert moved.value_at((-0.25, 0.75)) == f.value_at((0.25, 0.25))


class TestTruncate:
    def test_values_clipped(self):
        f = a.family_f(9, 1.0)  # constant 9 on [0,1]
        t = a.truncate(f, 4.0)
        assert t.sup_abs() == 4.0
        assert a.superlevel_measure(t, 4.0) == 0.0

    def test_no_op_below_sup(self):
        f = a.family_f(2, 1.0)
        assert a.truncate(f, 5.0) is f

    def test_negative_values_clipped_symmetrically(self):
        f = a.grid_function((F(0), F(1)), F(1, 2), [-3.0, 2.0])
        t = a.truncate(f, 1.5)
        assert list(t.values) == [-1.5, 1.5]

    def test_level_must_be_positive(self):
        f = a.family_f(2, 1.0)
        with pytest.raises(a.GridError):
            a.truncate(f, 0.0)

    def test_benign_tail_survives(self):
        v = a.family_v(4, 2.0)  # tail sup = 1 at the onset
        t = a.truncate(v, 2.0)
        assert t.tail == v.tail
        assert t.sup_abs() <= 2.0

    def test_tail_above_cut_rejected(self):
        # truncating through a live tail would need a flat-then-power shape
        v = a.family_v(4, 2.0)
        with pytest.raises(a.GridError):
            a.truncate(v, 0.5)

    def test_clamp_after_truncate_is_clamp(self):
        for k in (2, 5, 9):
            f = a.family_f(k, 1.0)
            lhs = a.clamp_unit(a.truncate(f, 1.5))
            rhs = a.clamp_unit(f)
            assert np.array_equal(lhs.values, rhs.values)


class TestClampAndScale:
    def test_clamp_unit_bounds_values(self):
        f = a.grid_function((F(0), F(1)), F(1, 4), [0.5, -2.0, 1.0, 3.0])
        c = a.clamp_unit(f)
        assert list(c.values) == [0.5, 1.0, 1.0, 1.0]

    def test_clamp_fixes_alpha_norm(self, corpus_members):
        for label, member, p in corpus_members:
            if not member.tail.is_zero:
                continue  # clamping a live tail is a different function class
            c = a.clamp_unit(member)
            assert a.alpha_norm(c, p) == pytest.approx(
                a.alpha_norm(member, p), abs=1e-15
            ), label

    def test_scale_values_and_tail(self):
        v = a.family_v(4, 2.0)
        s = a.scale(v, -0.5)
        assert s.tail.coefficient == 0.5
        assert np.array_equal(np.asarray(s.values), -0.5 * np.asarray(v.values))

    def test_scale_zero_kills_tail(self):
        v = a.family_v(4, 2.0)
        z = a.scale(v, 0.0)
        assert z.tail.is_zero
        assert a.alpha_norm(z, 2.0) == 0.0

    def test_scale_respects_homogeneity_of_lp(self):
        f = a.family_u(3, 2.0)
        assert a.lp_norm(a.scale(f, 0.25), 2.0) == pytest.approx(
            0.25 * a.lp_norm(f, 2.0), rel=1e-14
        )
