import numpy as np
import pytest

from afkit.emaf import AmbiguityGrid, compute_emaf, standardization_base, standardize, to_db
from afkit.sigcore import generate, MovingAverage

from conftest import emaf_direct, random_complex_signal


class TestGridType:
    def test_shape_and_lattice(self):
        n = 16
        g = compute_emaf(np.ones(n, dtype=complex))
        assert g.shape == (2 * n - 1, 2 * n)
        assert g.tau_values()[0] == -(n - 1) and g.tau_values()[-1] == n - 1
        nus = g.nu_values()
        assert nus[0] == -0.5 and nus[-1] == (n - 1) / (2 * n)

    def test_dimensions_for_paper_scale(self):
        g = compute_emaf(np.ones(256, dtype=complex))
        assert g.shape == (511, 512)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            AmbiguityGrid(np.zeros((3, 4), dtype=complex), 4)

    def test_rejects_bad_kind(self):
        with pytest.raises(ValueError):
            AmbiguityGrid(np.zeros((7, 8), dtype=complex), 4, "weird")


class TestComputeEmaf:
    def test_origin_cell_is_total_power(self, rng):
        x = random_complex_signal(rng, 64)
        g = compute_emaf(x)
        expected = np.sum(np.abs(x) ** 2)
        assert g.values[63, 64] == pytest.approx(expected, rel=1e-9)

    def test_unit_impulse(self):
        n, t0 = 16, 5
        x = np.zeros(n, dtype=complex)
        x[t0] = 1.0
        g = compute_emaf(x)
        nus = g.nu_values()
        np.testing.assert_allclose(
            g.values[n - 1, :], np.exp(-2j * np.pi * nus * t0), atol=1e-12
        )
        off = np.delete(g.values, n - 1, axis=0)
        assert np.max(np.abs(off)) <= 1e-12

    def test_matches_brute_force(self, rng):
        x = random_complex_signal(rng, 8)
        g = compute_emaf(x)
        ref = emaf_direct(x)
        np.testing.assert_allclose(g.values, ref, rtol=1e-10, atol=1e-10)

    def test_all_entries_finite(self, rng):
        g = compute_emaf(random_complex_signal(rng, 32))
        assert np.all(np.isfinite(g.values.real)) and np.all(np.isfinite(g.values.imag))

    def test_conjugation_symmetry(self, rng):
        # A(-nu,-tau] = e^{-j2 pi nu tau} conj(A(nu,tau]) away from nu = -1/2
        n = 24
        for _ in range(5):
            x = random_complex_signal(rng, n)
            g = compute_emaf(x)
            scale = np.abs(g.values).max()
            for m in range(2 * n - 1):
                tau = m - (n - 1)
                for k in range(1, 2 * n):
                    nu = (k - n) / (2.0 * n)
                    m2 = -tau + (n - 1)
                    k2 = -(k - n) + n
                    if k2 >= 2 * n:
                        continue
                    lhs = g.values[m2, k2]
                    rhs = np.exp(-2j * np.pi * nu * tau) * np.conj(g.values[m, k])
                    assert abs(lhs - rhs) <= 1e-9 * scale

    def test_row_parseval(self, rng):
        n = 32
        x = random_complex_signal(rng, n)
        g = compute_emaf(x)
        conj = np.conj(x)
        for m in range(2 * n - 1):
            tau = m - (n - 1)
            if tau >= 0:
                prod = x[tau:] * conj[: n - tau]
            else:
                prod = x[: n + tau] * conj[-tau:]
            lhs = np.sum(np.abs(g.values[m]) ** 2) / (2 * n)
            rhs = np.sum(np.abs(prod) ** 2)
            assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_quadratic_scaling(self, rng):
        x = random_complex_signal(rng, 16)
        g1 = compute_emaf(x)
        g2 = compute_emaf(2.0 * x)  # power-of-two scale: exact in floats
        np.testing.assert_array_equal(g2.values, 4.0 * g1.values)

    def test_too_short(self):
        with pytest.raises(ValueError):
            compute_emaf(np.array([1.0 + 0j]))


class TestStandardize:
    def test_origin_divisor(self):
        n = 256
        g = compute_emaf(np.ones(n, dtype=complex))
        s = standardize(g)
        v = g.values[n - 1, n]
        assert s.values[n - 1, n] == pytest.approx(v / np.sqrt(n / 2.0), rel=1e-12)

    def test_max_lag_divisor(self):
        n = 64
        x = np.ones(n, dtype=complex)
        g = compute_emaf(x)
        s = standardize(g)
        m = (n - 1) + (n - 1)  # tau = n-1 row
        v = g.values[m, n]
        assert s.values[m, n] == pytest.approx(v / np.sqrt(0.5), rel=1e-12)

    def test_floor_column(self):
        # nu = -1/2 weight floors at 1/(4N): divisor sqrt(256/1024) = 0.5
        n = 256
        g = compute_emaf(np.ones(n, dtype=complex))
        s = standardize(g)
        v = g.values[n - 1, 0]
        assert s.values[n - 1, 0] == pytest.approx(v / 0.5, rel=1e-12)

    def test_requires_raw_or_corrected(self):
        n = 16
        g = compute_emaf(np.ones(n, dtype=complex))
        s = standardize(g)
        with pytest.raises(ValueError):
            standardize(s)

    def test_base_grid_cached_readonly(self):
        base = standardization_base(32)
        assert not base.flags.writeable


class TestToDb:
    def test_amplitude_unit(self):
        vals = np.array([[1.0 + 0j]])
        g = AmbiguityGrid(np.ones((31, 32), dtype=complex), 16)
        assert to_db(g, "amplitude")[0, 0] == pytest.approx(0.0)

    def test_power_hundred(self):
        arr = np.full((3, 3), 100.0)
        assert to_db(arr, "power")[1, 1] == pytest.approx(20.0)

    def test_zero_clamps(self):
        arr = np.zeros((2, 2))
        assert np.all(to_db(arr, "power") == -300.0)
        assert np.all(to_db(arr.astype(complex), "amplitude") == -300.0)

    def test_power_rejects_negative(self):
        with pytest.raises(ValueError):
            to_db(np.array([[-1.0]]), "power")

    def test_realistic_grid(self):
        x = generate(MovingAverage(), 64, 0)
        g = compute_emaf(x)
        db = to_db(g, "amplitude")
        assert np.all(np.isfinite(db))
        assert db.max() == pytest.approx(20 * np.log10(np.abs(g.values).max()))
