import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csdqn.exceptions import ConfigError, ContractError, NumericError, ShapeError
from csdqn.neuralnet import Adam, Gradients, Mlp, load_snapshot, save_snapshot, snapshot_bytes

from oracles import finite_difference_grads, straight_line_forward


def random_case(rng, max_layers=3, max_units=16, batch=None):
    n_layers = int(rng.integers(1, max_layers + 1))
    sizes = [int(v) for v in rng.integers(1, max_units + 1, size=n_layers + 1)]
    net = Mlp(sizes, seed=int(rng.integers(1 << 30)))
    for b in net.biases:
        b[...] = rng.normal(scale=0.1, size=b.shape)
    n = batch or int(rng.integers(1, 5))
    x = rng.normal(size=(n, sizes[0]))
    mask = np.zeros((n, sizes[-1]))
    mask[np.arange(n), rng.integers(sizes[-1], size=n)] = 1.0
    targets = rng.normal(size=n)
    return net, x, targets, mask


def assert_grads_close(analytic, numeric, rtol=1e-4, atol=1e-9):
    for a, n in zip(analytic, numeric):
        err = np.abs(a - n)
        bound = rtol * np.maximum(np.abs(a), np.abs(n)) + atol
        assert (err <= bound).all(), f"max violation {np.max(err - bound)}"


class TestInit:
    def test_same_seed_identical(self):
        a = Mlp([4, 64, 64, 2], seed=7)
        b = Mlp([4, 64, 64, 2], seed=7)
        for pa, pb in zip(a.parameters(), b.parameters()):
            assert np.array_equal(pa, pb)

    def test_biases_zero(self):
        net = Mlp([4, 2], seed=1)
        assert all((b == 0.0).all() for b in net.biases)

    def test_he_uniform_bound(self):
        net = Mlp([4, 64, 2], seed=3)
        for w in net.weights:
            assert np.abs(w).max() <= np.sqrt(6.0 / w.shape[1])

    def test_shapes(self):
        net = Mlp([3, 5, 2], seed=0)
        assert [w.shape for w in net.weights] == [(5, 3), (2, 5)]
        assert [b.shape for b in net.biases] == [(5,), (2,)]

    @pytest.mark.parametrize("sizes", [[], [4], [4, 0, 2], [4, -1], [4, 2.5]])
    def test_bad_sizes(self, sizes):
        with pytest.raises(ConfigError):
            Mlp(sizes, seed=0)


class TestForward:
    def test_zero_weights_return_bias(self):
        net = Mlp([3, 4, 2], seed=0)
        for w in net.weights:
            w[...] = 0.0
        net.biases[-1][...] = [0.3, -1.2]
        assert np.array_equal(net.forward([5.0, -2.0, 1.0]), [0.3, -1.2])

    def test_identity_layer(self):
        net = Mlp([2, 2], seed=0)
        net.weights[0][...] = np.eye(2)
        assert np.array_equal(net.forward([3.0, -2.0]), [3.0, -2.0])

    def test_matches_straight_line_oracle(self, rng):
        for _ in range(20):
            net, x, _, _ = random_case(rng)
            for xi in x:
                np.testing.assert_allclose(
                    net.forward(xi), straight_line_forward(net.weights, net.biases, xi), rtol=1e-12, atol=1e-12
                )

    def test_batch_rows_match_single(self, rng):
        net, x, _, _ = random_case(rng, batch=6)
        np.testing.assert_allclose(net.forward(x), np.stack([net.forward(r) for r in x]), rtol=1e-13, atol=1e-13)

    def test_pure(self, rng):
        net, x, _, _ = random_case(rng)
        assert np.array_equal(net.forward(x), net.forward(x))

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            Mlp([3, 2], seed=0).forward([1.0, 2.0])

    def test_non_finite_input(self):
        with pytest.raises(NumericError):
            Mlp([2, 2], seed=0).forward([np.nan, 1.0])


class TestBackward:
    def test_perfect_fit(self, rng):
        net, x, _, mask = random_case(rng)
        targets = (net.forward(x) * mask).sum(axis=1)
        loss, grads = net.backward(x, targets, mask)
        assert loss == 0.0
        assert all((g == 0.0).all() for g in grads.arrays())

    def test_hand_derivation_two_parameter_net(self):
        # Q(x) = w*x + b, one output; loss = (w*x + b - t)^2
        net = Mlp([1, 1], seed=0)
        net.weights[0][...] = 0.5
        net.biases[0][...] = 0.25
        x, t = 2.0, 3.0
        loss, g = net.backward([x], [t], [[1.0]])
        q = 0.5 * 2.0 + 0.25  # 1.25
        assert loss == pytest.approx((q - t) ** 2)
        assert g.weights[0][0, 0] == pytest.approx(2 * (q - t) * x)  # -7.0
        assert g.biases[0][0] == pytest.approx(2 * (q - t))  # -3.5

    def test_finite_differences(self, rng):
        for _ in range(5):
            net, x, t, m = random_case(rng)
            _, g = net.backward(x, t, m)
            assert_grads_close(g.arrays(), finite_difference_grads(net, x, t, m))

    def test_unmasked_outputs_do_not_contribute(self, rng):
        net, x, t, m = random_case(rng, batch=3)
        if net.n_outputs == 1:
            return
        loss, g = net.backward(x, t, m)
        untouched = m.sum(axis=0) == 0
        assert (g.weights[-1][untouched] == 0).all()
        assert (g.biases[-1][untouched] == 0).all()

    def test_loss_is_batch_mean(self, rng):
        net, x, t, m = random_case(rng, batch=4)
        loss, _ = net.backward(x, t, m)
        singles = [net.backward(x[i], [t[i]], m[i:i + 1])[0] for i in range(4)]
        assert loss == pytest.approx(np.mean(singles), rel=1e-12)

    @pytest.mark.parametrize("mask", [[[0.0, 0.0]], [[1.0, 1.0]], [[0.5, 0.5]]])
    def test_bad_mask(self, mask):
        with pytest.raises(ContractError):
            Mlp([2, 2], seed=0).backward([1.0, 1.0], [0.0], mask)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**30))
    def test_loss_nonnegative_and_shapes_closed(self, seed):
        r = np.random.default_rng(seed)
        net, x, t, m = random_case(r)
        loss, g = net.backward(x, t, m)
        assert loss >= 0.0
        assert [a.shape for a in g.arrays()] == [p.shape for p in net.parameters()]
        Adam().step(net, g)
        assert [a.shape for a in g.arrays()] == [p.shape for p in net.parameters()]


class TestAdam:
    def test_zero_gradient_keeps_parameters(self):
        net = Mlp([3, 2], seed=0)
        before = net.copy()
        opt = Adam()
        opt.step(net, Gradients([np.zeros((2, 3))], [np.zeros(2)]))
        assert opt.t == 1
        assert net.max_abs_difference(before) == 0.0

    def test_first_step_magnitude(self):
        # bias-corrected moments are g and g^2 at t=1, so the step is lr * g / (|g| + eps)
        net = Mlp([1, 1], seed=0)
        net.weights[0][...] = 0.0
        opt = Adam(learning_rate=0.1)
        opt.step(net, Gradients([np.ones((1, 1))], [np.zeros(1)]))
        assert net.weights[0][0, 0] == pytest.approx(-0.1 / (1.0 + 1e-8), abs=1e-15)
        assert opt.t == 1

    def test_descends_parabola(self):
        net = Mlp([1, 1], seed=0)
        net.weights[0][...] = 1.0
        opt = Adam(learning_rate=0.1)
        path = [1.0]
        for _ in range(50):
            theta = net.weights[0][0, 0]
            opt.step(net, Gradients([np.array([[2 * theta]])], [np.zeros(1)]))
            path.append(net.weights[0][0, 0])
        # monotone until the first sign change; Adam's momentum then oscillates around 0
        first_cross = next(i for i, v in enumerate(path) if v <= 0)
        assert all(a > b for a, b in zip(path[:first_cross], path[1:first_cross]))
        assert abs(path[-1]) < 0.2

    def test_non_finite_gradient(self):
        net = Mlp([1, 1], seed=0)
        with pytest.raises(NumericError):
            Adam().step(net, Gradients([np.array([[np.inf]])], [np.zeros(1)]))

    def test_shape_mismatch(self):
        net = Mlp([2, 1], seed=0)
        with pytest.raises(ShapeError):
            Adam().step(net, Gradients([np.zeros((1, 3))], [np.zeros(1)]))

    def test_second_moment_nonnegative(self, rng):
        net, x, t, m = random_case(rng)
        opt = Adam()
        for _ in range(5):
            opt.step(net, net.backward(x, t, m)[1])
        assert (opt.v >= 0).all()


class TestSnapshot:
    def test_round_trip_bit_exact(self, rng, tmp_path):
        net, *_ = random_case(rng)
        net.weights[0][0, 0] = np.nextafter(1.0, 2.0)
        save_snapshot(net, tmp_path / "net.mlp")
        back = load_snapshot(tmp_path / "net.mlp")
        assert back.layer_sizes == net.layer_sizes
        for a, b in zip(net.parameters(), back.parameters()):
            assert a.tobytes() == b.tobytes()

    def test_bad_magic(self):
        with pytest.raises(ContractError):
            load_snapshot(b"nope" + bytes(20))

    def test_truncated(self):
        data = snapshot_bytes(Mlp([2, 2], seed=0))
        with pytest.raises(Exception):
            load_snapshot(data[:-8])
