import math

import numpy as np
import pytest

from grnn_inpaint import (
    DamageMask,
    GrayImage,
    Kernel,
    ParameterError,
    TrainingError,
    UnfillableError,
    cd_inpaint,
    kernel_eval,
    lssvm_predict,
    lssvm_train,
    rc_inpaint,
    rd_inpaint,
    two_kernel_inpaint,
)
from grnn_inpaint.lssvm import cd_values, nearest_known, rd_values
from oracles import additive, lssvm_kkt_solve, rbf

K1 = Kernel("rbf1d", 5.0)


class TestKernel:
    def test_rbf_self(self):
        assert kernel_eval(K1, [3.0], [3.0]) == 1.0
        assert kernel_eval(Kernel("rbf2d", 2.0), [1, 2], [1, 2]) == 1.0

    def test_additive_self(self):
        assert kernel_eval(Kernel("additive2d", (3.0, 7.0)), [4, 5], [4, 5]) == 2.0

    def test_rbf_unit_distance(self):
        assert kernel_eval(Kernel("rbf1d", 1.0), [0], [1]) == pytest.approx(math.exp(-1), abs=1e-15)

    def test_additive_value(self):
        k = Kernel("additive2d", (2.0, 3.0))
        expected = float(additive((1, 2), (4, 0), (2.0, 3.0)))
        assert kernel_eval(k, [1, 2], [4, 0]) == pytest.approx(expected, abs=1e-15)
        assert kernel_eval(k, [1, 2], [4, 0]) == kernel_eval(k, [4, 0], [1, 2])

    def test_dimension_mismatch(self):
        with pytest.raises(ParameterError):
            kernel_eval(K1, [0, 1], [0, 1])
        with pytest.raises(ParameterError):
            kernel_eval(Kernel("rbf2d"), [0, 1], [0])

    @pytest.mark.parametrize("bw", [0, -1, float("nan")])
    def test_bad_bandwidth(self, bw):
        with pytest.raises(ParameterError):
            Kernel("rbf1d", bw)


class TestTrain:
    def test_constant_targets_exact(self):
        rng = np.random.default_rng(0)
        x = rng.uniform(0, 30, size=(12, 1))
        m = lssvm_train(x, np.full(12, 42.0), K1, 100)
        assert np.all(m.alphas == 0) and m.bias == 42.0
        assert lssvm_predict(m, [7.3]) == 42.0

    def test_single_sample(self):
        m = lssvm_train([[3.0]], [17.0], K1, 10)
        assert m.alphas.tolist() == [0.0] and m.bias == 17.0

    def test_two_point_interpolation(self):
        k = Kernel("rbf1d", 1.0)
        m = lssvm_train([0.0, 1.0], [0.0, 1.0], k, 1e6)
        b, alphas, f = lssvm_kkt_solve([(0,), (1,)], [0, 1], lambda u, v: rbf(u, v, 1.0), 1e6)
        assert m.bias == pytest.approx(b, abs=1e-9)
        np.testing.assert_allclose(m.alphas, alphas, atol=1e-6)
        assert lssvm_predict(m, [0.0]) == pytest.approx(f((0,)), abs=1e-9)
        assert lssvm_predict(m, [0.0]) == pytest.approx(0.0, abs=1e-4)
        assert lssvm_predict(m, [1.0]) == pytest.approx(1.0, abs=1e-4)

    def test_matches_high_precision_solve_2d(self):
        rng = np.random.default_rng(4)
        x = rng.integers(0, 10, size=(8, 2)).astype(float)
        x = np.unique(x, axis=0)
        y = rng.integers(0, 256, size=len(x))
        bws = (2.0, 3.0)
        m = lssvm_train(x, y, Kernel("additive2d", bws), 50.0)
        b, alphas, f = lssvm_kkt_solve([tuple(p) for p in x], y, lambda u, v: additive(u, v, bws), 50.0)
        assert m.bias == pytest.approx(b, abs=1e-8)
        np.testing.assert_allclose(m.alphas, alphas, atol=1e-8)
        assert lssvm_predict(m, [4.5, 1.0]) == pytest.approx(f((4.5, 1.0)), abs=1e-8)

    def test_kkt_invariants(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            n = int(rng.integers(2, 21))
            x = rng.uniform(0, 40, size=n)
            m = lssvm_train(x, rng.uniform(0, 255, n), K1, 10 ** rng.uniform(1, 6))
            assert abs(m.alphas.sum()) <= 1e-8
            assert m.kkt_residual() <= 1e-8

    def test_duplicates_merged(self):
        m = lssvm_train([1.0, 1.0, 2.0], [10.0, 20.0, 40.0], K1, 1e6)
        assert len(m.inputs) == 2
        assert lssvm_predict(m, [1.0]) == pytest.approx(15.0, abs=1e-3)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(0, 20, 9)
        y = rng.uniform(0, 255, 9)
        p = rng.permutation(9)
        a = lssvm_train(x, y, K1, 100)
        b = lssvm_train(x[p], y[p], K1, 100)
        assert lssvm_predict(a, [6.6]) == pytest.approx(lssvm_predict(b, [6.6]), abs=1e-9)

    def test_singular_system(self):
        # all-ones kernel matrix with no ridge to speak of
        with pytest.raises(TrainingError, match="gamma"):
            lssvm_train([0.0, 1e-9, 2e-9], [0.0, 1.0, 2.0], Kernel("rbf1d", 1e6), 1e15)

    def test_bad_arguments(self):
        with pytest.raises(ParameterError):
            lssvm_train([], [], K1, 1.0)
        with pytest.raises(ParameterError):
            lssvm_train([1.0], [1.0], K1, 0.0)
        with pytest.raises(ParameterError):
            lssvm_train([[1.0, 2.0]], [1.0], K1, 1.0)

    def test_predict_dimension_mismatch(self):
        m = lssvm_train([0.0, 1.0], [0.0, 1.0], K1, 10)
        with pytest.raises(ParameterError):
            lssvm_predict(m, [1.0, 2.0])


def gi(rows):
    return GrayImage(np.asarray(rows))


def dm(rows):
    return DamageMask(np.asarray(rows, dtype=bool))


class TestModes:
    def test_rd_constant_row(self):
        res = rd_inpaint(gi([[10, 0, 10]]), dm([[1, 0, 1]]), K1, 1e6)
        assert res.image.pixels.tolist() == [[10, 10, 10]]
        assert len(res.fallback) == 0

    def test_rd_row_oracle(self):
        _, _, f = lssvm_kkt_solve([(0,), (2,)], [0, 2], lambda u, v: rbf(u, v, 5.0), 100)
        vals = rd_values(gi([[0, 0, 2]]), dm([[1, 0, 1]]), K1, 100)
        assert vals[0, 1] == pytest.approx(f((1,)), abs=1e-9)
        assert 0 <= rd_inpaint(gi([[0, 0, 2]]), dm([[1, 0, 1]]), K1, 100).image.pixels[0, 1] <= 2

    def test_cd_constant_column(self):
        res = cd_inpaint(gi([[10], [0], [10]]), dm([[1], [0], [1]]), K1, 1e6)
        assert res.image.pixels.ravel().tolist() == [10, 10, 10]

    @pytest.mark.parametrize("fn", [rd_inpaint, cd_inpaint, rc_inpaint, two_kernel_inpaint])
    def test_undamaged_identity(self, fn):
        im = GrayImage(np.arange(20).reshape(4, 5))
        assert fn(im, DamageMask.all_known(4, 5)).image == im

    def test_rd_cd_transpose_duality(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            px = rng.integers(0, 256, size=(9, 13))
            known = rng.random((9, 13)) > 0.3
            cd = cd_inpaint(GrayImage(px), DamageMask(known), K1, 100)
            rd_t = rd_inpaint(GrayImage(px.T), DamageMask(known.T), K1, 100)
            assert np.array_equal(cd.image.pixels, rd_t.image.pixels.T)

    def test_rc_average_rule(self):
        rng = np.random.default_rng(12)
        px = rng.integers(0, 256, size=(10, 10))
        known = rng.random((10, 10)) > 0.25
        known[3, :] = False
        im, m = GrayImage(px), DamageMask(known)
        rd = rd_values(im, m, K1, 100)
        cd = cd_values(im, m, K1, 100)
        out = rc_inpaint(im, m, K1, 100)
        for r, c in np.argwhere(~known):
            a, b = rd[r, c], cd[r, c]
            if np.isnan(a):
                want = b
            elif np.isnan(b):
                want = a
            else:
                want = (a + b) / 2
            want = math.floor(min(max(want, 0), 255) + 0.5)
            assert out.image.pixels[r, c] == want

    def test_rc_mean_of_directions(self):
        # RD sees 10 along the row, CD sees 20 along the column
        px = np.array([[0, 20, 0], [10, 0, 10], [0, 20, 0]])
        known = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], bool)
        out = rc_inpaint(GrayImage(px), DamageMask(known), K1, 1e6)
        assert out.image.pixels[1, 1] == 15

    def test_rc_uses_cd_on_fully_damaged_row(self):
        px = np.array([[5, 5, 5], [0, 0, 0], [5, 9, 5]])
        known = np.array([[1, 1, 1], [0, 0, 0], [1, 1, 1]], bool)
        im, m = GrayImage(px), DamageMask(known)
        assert rd_inpaint(im, m, K1, 1e6).fallback.tolist() == [[1, 0], [1, 1], [1, 2]]
        cd = cd_inpaint(im, m, K1, 1e6)
        rc = rc_inpaint(im, m, K1, 1e6)
        assert np.array_equal(rc.image.pixels, cd.image.pixels)
        assert len(rc.fallback) == 0

    def test_fully_damaged_row_reported(self):
        px = np.array([[1, 2], [0, 0]])
        res = rd_inpaint(GrayImage(px), DamageMask(np.array([[1, 1], [0, 0]], bool)), K1, 10)
        assert res.fallback.tolist() == [[1, 0], [1, 1]]
        assert res.image.pixels[1].tolist() == [0, 0]

    def test_two_kernel_constant(self):
        rng = np.random.default_rng(1)
        known = rng.random((12, 12)) > 0.3
        out = two_kernel_inpaint(GrayImage(np.full((12, 12), 100)), DamageMask(known))
        assert np.all(out.image.pixels == 100)

    def test_two_kernel_centre_oracle(self):
        known = np.ones((3, 3), bool)
        known[1, 1] = False
        px = np.full((3, 3), 77)
        k = Kernel("additive2d", 5.0)
        out = two_kernel_inpaint(GrayImage(px), DamageMask(known), k, 100)
        xs = [tuple(p) for p in np.argwhere(known)]
        _, _, f = lssvm_kkt_solve(xs, [77] * 8, lambda u, v: additive(u, v, (5.0, 5.0)), 100)
        assert f((1, 1)) == pytest.approx(77, abs=1e-9)
        assert out.image.pixels[1, 1] == 77

    def test_two_kernel_rbf_option(self):
        px = np.tile(np.arange(8) * 3, (8, 1))
        known = np.ones((8, 8), bool)
        known[4, 4] = False
        out = two_kernel_inpaint(GrayImage(px), DamageMask(known), Kernel("rbf2d", 3.0), 1e4)
        assert abs(int(out.image.pixels[4, 4]) - 12) <= 1

    def test_two_kernel_needs_known(self):
        with pytest.raises(UnfillableError):
            two_kernel_inpaint(GrayImage(np.zeros((3, 3), int)), DamageMask(np.zeros((3, 3), bool)))

    def test_two_kernel_rejects_1d_kernel(self):
        with pytest.raises(ParameterError):
            two_kernel_inpaint(GrayImage(np.zeros((3, 3), int)), DamageMask.all_known(3, 3), K1)

    def test_nearest_known_cap(self):
        known = np.ones((9, 9), bool)
        known[4, 4] = False
        picked = nearest_known(known, 8)
        assert {tuple(p) for p in picked} == {(r, c) for r in (3, 4, 5) for c in (3, 4, 5)} - {(4, 4)}
        # deterministic tie-breaking: the 16 ring-2 pixels are taken row-major
        picked = nearest_known(known, 10)
        assert [tuple(p) for p in picked if max(abs(p[0] - 4), abs(p[1] - 4)) == 2] == [(2, 2), (2, 3)]

    def test_two_kernel_cap_applied(self):
        rng = np.random.default_rng(2)
        px = rng.integers(0, 256, size=(20, 20))
        known = np.ones((20, 20), bool)
        known[10, 10] = False
        a = two_kernel_inpaint(GrayImage(px), DamageMask(known), cap=24)
        assert 0 <= a.image.pixels[10, 10] <= 255

    def test_modes_preserve_known_and_range(self):
        rng = np.random.default_rng(21)
        for fn in (rd_inpaint, cd_inpaint, rc_inpaint, two_kernel_inpaint):
            px = rng.integers(0, 256, size=(12, 15))
            known = rng.random((12, 15)) > 0.2
            out = fn(GrayImage(px), DamageMask(known)).image.pixels
            assert np.array_equal(out[known], px[known])
            assert out.min() >= 0 and out.max() <= 255
