import numpy as np
import pytest
import scipy.signal
from hypothesis import given, settings
from hypothesis import strategies as st

from lqoaaa.errors import NonFiniteState, SingularShift
from lqoaaa.model import LqoModel, TimeSignal, eval_h1, eval_h2, make_benchmark, simulate


def scalar_model(c=1.0, m=1.0):
    return LqoModel([[-1.0]], [1.0], [c], [[m]])


def kron_h2(model, s, z):
    """vec(M)^T [(sI-A)^{-1} b kron (zI-A)^{-1} b] with explicit inverses."""
    n = model.dim
    xs = np.linalg.inv(s * np.eye(n) - model.A) @ model.b
    xz = np.linalg.inv(z * np.eye(n) - model.A) @ model.b
    return model.M.ravel() @ np.kron(xs, xz)


class TestConstruction:
    def test_symmetrizes_m(self):
        m = LqoModel(np.diag([-1.0, -2.0]), [1, 1], [1, 1], [[0, 1], [0, 0]])
        np.testing.assert_array_equal(m.M, [[0, 0.5], [0.5, 0]])
        assert m.asymmetry == 1.0

    def test_rejects_bad_shapes(self):
        with pytest.raises(ValueError, match="b"):
            LqoModel(np.eye(2), [1, 1, 1], [1, 1], np.eye(2))
        with pytest.raises(ValueError, match="M"):
            LqoModel(np.eye(2), [1, 1], [1, 1], np.eye(3))

    def test_read_only(self):
        m = scalar_model()
        with pytest.raises(ValueError):
            m.A[0, 0] = 3.0

    def test_stability_flag(self):
        assert scalar_model().is_stable()
        assert not LqoModel([[0.5]], [1], [1], [[1]]).is_stable()


class TestTransferFunctions:
    def test_h1_scalar(self):
        m = scalar_model()
        assert eval_h1(m, 0) == 1
        assert eval_h1(m, 1) == 0.5

    def test_h1_zero_c(self):
        m = make_benchmark("quad-only", 4, seed=1)
        assert eval_h1(m, 0.3j) == 0

    def test_h1_diag_partial_fractions(self):
        m = LqoModel(np.diag([-1.0, -2.0]), [1, 1], [1, 1], np.eye(2))
        assert eval_h1(m, 0) == pytest.approx(1.5, rel=1e-15)
        for s in [0.5j, 2 + 1j, -0.5]:
            assert eval_h1(m, s) == pytest.approx(1 / (s + 1) + 1 / (s + 2), rel=1e-14)

    def test_h2_scalar(self):
        m = scalar_model()
        assert eval_h2(m, 0, 0) == 1
        assert eval_h2(m, 1, 1) == 0.25

    def test_h2_diag(self):
        m = LqoModel(np.diag([-1.0, -2.0]), [1, 1], [1, 1], np.eye(2))
        assert eval_h2(m, 0, 0) == pytest.approx(1.25, rel=1e-15)
        s, z = 1j, 2.0 - 1j
        expected = 1 / ((s + 1) * (z + 1)) + 1 / ((s + 2) * (z + 2))
        assert eval_h2(m, s, z) == pytest.approx(expected, rel=1e-14)

    def test_pole_raises(self):
        m = scalar_model()
        with pytest.raises(SingularShift) as e:
            eval_h1(m, -1)
        assert e.value.point == -1
        with pytest.raises(SingularShift) as e:
            eval_h2(m, 0, -1)
        assert e.value.variable == "z"

    @pytest.mark.parametrize("order", [1, 2, 3, 5])
    def test_kronecker_consistency(self, rng, order):
        m = make_benchmark("random-stable", order, seed=order)
        for _ in range(10):
            s, z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            ref = kron_h2(m, s, z)
            assert abs(eval_h2(m, s, z) - ref) <= 1e-10 * abs(ref)


@settings(max_examples=50, deadline=None)
@given(
    st.integers(1, 6),
    st.integers(0, 1000),
    st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False),
    st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False),
)
def test_h2_symmetry_and_conjugation(order, seed, s, z):
    m = make_benchmark("random-stable", order, seed=seed)
    try:
        v = eval_h2(m, s, z)
        vt = eval_h2(m, z, s)
        vc = eval_h2(m, s.conjugate(), z.conjugate())
        h = eval_h1(m, s)
        hc = eval_h1(m, s.conjugate())
    except SingularShift:
        return
    tol = 1e-12 * (1 + abs(v))
    assert abs(v - vt) <= tol
    assert abs(vc - v.conjugate()) <= tol
    assert abs(hc - h.conjugate()) <= 1e-12 * (1 + abs(h))


class TestBenchmarks:
    def test_diag_order_one(self):
        m = make_benchmark("diag", 1)
        for arr, ref in [(m.A, [[-1]]), (m.b, [1]), (m.c, [1]), (m.M, [[1]])]:
            np.testing.assert_array_equal(arr, ref)

    def test_diag_poles(self):
        m = make_benchmark("diag", 3)
        np.testing.assert_array_equal(np.sort(np.diag(m.A)), [-3, -2, -1])

    def test_random_deterministic(self):
        a = make_benchmark("random-stable", 5, seed=7)
        b = make_benchmark("random-stable", 5, seed=7)
        for x, y in zip((a.A, a.b, a.c, a.M), (b.A, b.b, b.c, b.M)):
            np.testing.assert_array_equal(x, y)
        assert a.is_stable()

    def test_quad_only(self):
        m = make_benchmark("quad-only", 4, seed=2)
        assert not m.has_linear_output and m.is_stable()

    def test_bad_order(self):
        with pytest.raises(ValueError):
            make_benchmark("diag", 0)


class TestSimulate:
    def grid(self, value, t1=1.0, dt=1e-3):
        n = int(round(t1 / dt)) + 1
        return TimeSignal(0.0, dt, np.full(n, value))

    def test_zero_input(self):
        y = simulate(make_benchmark("random-stable", 4, seed=0), self.grid(0.0))
        assert np.all(y.values == 0)

    def test_linear_step(self):
        y = simulate(scalar_model(c=1.0, m=0.0), self.grid(1.0))
        assert abs(y.values[-1] - (1 - np.exp(-1))) <= 1e-6
        np.testing.assert_allclose(y.values, 1 - np.exp(-y.times), atol=1e-6)

    def test_quadratic_step(self):
        y = simulate(scalar_model(c=0.0, m=1.0), self.grid(1.0))
        assert abs(y.values[-1] - (1 - np.exp(-1)) ** 2) <= 1e-6

    def test_linear_superposition(self):
        m = make_benchmark("random-stable", 4, seed=3)
        lin = LqoModel(m.A, m.b, m.c, np.zeros_like(m.M))
        t = 1e-3 * np.arange(3001)
        u = TimeSignal(0.0, 1e-3, np.sin(2 * t) + 0.3)
        u2 = TimeSignal(0.0, 1e-3, 2 * u.values)
        y, y2 = simulate(lin, u), simulate(lin, u2)
        np.testing.assert_allclose(y2.values, 2 * y.values, atol=1e-8)
        # independent linear simulator (exact discretization, linear input)
        _, ref, _ = scipy.signal.lsim((m.A, m.b[:, None], m.c[None, :], 0.0), u.values, t)
        np.testing.assert_allclose(y.values, ref, atol=1e-8)

    def test_overflow(self):
        unstable = LqoModel([[2.0]], [1.0], [1.0], [[1.0]])
        with pytest.raises(NonFiniteState):
            simulate(unstable, self.grid(1.0, t1=400.0, dt=0.01))

    def test_signal_validation(self):
        with pytest.raises(ValueError):
            TimeSignal(0.0, 0.0, [1.0])
        with pytest.raises(ValueError):
            TimeSignal(0.0, 0.1, [])
