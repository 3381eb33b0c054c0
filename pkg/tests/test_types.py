import numpy as np
import pytest

from spacelike.core import Behavior, Context, JointBehavior, Weight, validate
from spacelike.errors import ShapeError, UnknownIndexError
from spacelike.fixtures import pr_box

from conftest import random_joint


def _binary(name):
    return Context(name, ("0", "1"))


class TestContext:
    def test_outcomes_are_strings(self):
        c = Context("E", (0, 1, 2))
        assert c.outcomes == ("0", "1", "2")
        assert c.n == 3
        assert c.index("2") == 2
        assert c.index(1) == 1

    def test_duplicate_outcomes_rejected(self):
        with pytest.raises(ShapeError):
            Context("E", ("a", "a"))

    def test_empty_rejected(self):
        with pytest.raises(ShapeError):
            Context("E", ())

    def test_unknown_outcome_names_identifier(self):
        with pytest.raises(UnknownIndexError, match="'zz'"):
            Context("E", ("a", "b")).index("zz")


class TestBehavior:
    def test_nested_and_flat_agree(self):
        b1 = Behavior(["W"], [_binary("x"), Context("y", "abc")], [[[0.5, 0.5], [0.2, 0.3, 0.5]]])
        b2 = Behavior(["W"], [_binary("x"), Context("y", "abc")], np.array([0.5, 0.5, 0.2, 0.3, 0.5]))
        assert b1 == b2
        assert hash(b1) == hash(b2)
        np.testing.assert_array_equal(b1.row("W", "y"), [0.2, 0.3, 0.5])

    def test_immutable(self):
        b = Behavior(["W"], [_binary("x")], [[[0.5, 0.5]]])
        with pytest.raises(ValueError):
            b.data[0] = 1.0
        with pytest.raises(ValueError):
            b.row(0, 0)[0] = 1.0

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            Behavior(["W"], [_binary("x")], [[[0.2, 0.3, 0.5]]])

    def test_duplicate_preparations(self):
        with pytest.raises(ShapeError):
            Behavior(["W", "W"], [_binary("x")], [[[0.5, 0.5]], [[0.5, 0.5]]])

    def test_unknown_context(self):
        b = Behavior(["W"], [_binary("x")], [[[0.5, 0.5]]])
        with pytest.raises(UnknownIndexError, match="'nope'"):
            b.row("W", "nope")
        with pytest.raises(KeyError):
            b.row("V", "x")

    def test_contexts_as_dicts_or_pairs(self):
        b = Behavior(["W"], [{"name": "x", "outcomes": ["u", "v"]}, ("y", ["0", "1"])],
                     [[[1, 0], [0, 1]]])
        assert [c.name for c in b.contexts] == ["x", "y"]
        assert b.contexts[0].outcomes == ("u", "v")


class TestJointBehavior:
    def test_layout_order(self):
        """Flat layout is preparation > local > remote > e_i > d_j."""
        rng = np.random.default_rng(0)
        jb = random_joint(rng, preps=2, n_local=(2, 3), n_remote=(3, 2))
        nested = jb.to_nested()
        flat = []
        for w in nested:
            for e in w:
                for d in e:
                    for row in d:
                        flat.extend(row)
        np.testing.assert_array_equal(jb.data, flat)
        for (w, e, d), block in jb.blocks():
            np.testing.assert_array_equal(block, np.array(nested[w][e][d]))

    def test_block_ptr(self):
        jb = random_joint(np.random.default_rng(1), preps=1, n_local=(2, 3), n_remote=(4,))
        np.testing.assert_array_equal(jb.block_ptr(), [0, 8, 20])

    def test_swapped_transposes(self):
        jb = random_joint(np.random.default_rng(2), preps=1, n_local=(2, 3), n_remote=(2, 4))
        sw = jb.swapped()
        for (w, e, d), block in jb.blocks():
            np.testing.assert_array_equal(sw.block(w, d, e), block.T)
        assert sw.swapped() == jb

    def test_block_shape_checked(self):
        with pytest.raises(ShapeError):
            JointBehavior(["W"], [_binary("x")], [_binary("y")], [[[[[1.0, 0.0, 0.0], [0, 0]]]]])

    def test_with_data_keeps_structure(self):
        P = pr_box()
        Q = P.with_data(np.full(P.size, 0.25))
        assert Q.same_structure(P)
        assert Q != P


class TestValidate:
    def test_uniform_clean(self):
        assert validate(Behavior(["W"], [_binary("x")], [[[0.5, 0.5]]])) == []

    def test_row_sums_to_1_2(self):
        v = validate(Behavior(["W"], [_binary("x")], [[[0.6, 0.6]]]))
        assert len(v) == 1
        assert v[0].kind == "normalization"
        assert v[0].index == ("W", "x")
        assert v[0].magnitude == pytest.approx(0.2, abs=1e-15)

    def test_tiny_negative_clamped(self):
        b = Behavior(["W"], [_binary("x")], [[[-1e-12, 1.0]]])
        assert b.data[0] == 0.0
        assert validate(b) == []

    def test_large_negative_reported(self):
        b = Behavior(["W"], [_binary("x")], [[[-0.1, 1.1]]])
        kinds = sorted(v.kind for v in validate(b))
        assert kinds == ["negative"]
        assert validate(b)[0].magnitude == pytest.approx(0.1)

    def test_non_finite_reported(self):
        b = Behavior(["W"], [_binary("x")], [[[np.nan, 1.0]]])
        kinds = {v.kind for v in validate(b)}
        assert "non-finite" in kinds

    def test_joint_block_index(self):
        P = pr_box()
        data = P.data.copy()
        data[P.offset(0, 1, 0)] += 0.3
        v = validate(P.with_data(data))
        assert [(x.kind, x.index) for x in v] == [("normalization", ("W", "x1", "y0"))]
        assert v[0].magnitude == pytest.approx(0.3)

    def test_pr_box_clean(self):
        assert validate(pr_box()) == []


class TestWeight:
    def test_context_independent_total(self):
        w = Weight([_binary("x"), Context("y", "abc")], [[0.1, 0.2], [0.1, 0.1, 0.1]])
        assert w.is_weight(1e-12)
        assert not w.is_normalized()
        assert w.total == pytest.approx(0.3)
        n = w.normalized()
        assert n.is_normalized()
        np.testing.assert_allclose(n.values[0], [1 / 3, 2 / 3])

    def test_context_dependent_total_is_not_a_weight(self):
        w = Weight([_binary("x"), _binary("y")], [[0.1, 0.2], [0.1, 0.1]])
        assert not w.is_weight()
