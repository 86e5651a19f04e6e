import numpy as np
import pytest

from ndqwt import FbmSpec, SizeTooLarge, generate_fbm_1d, generate_fbm_2d
from ndqwt.fbm import fbm_covariance, fgn_autocovariance


def test_spec_validation():
    with pytest.raises(ValueError):
        FbmSpec(1.0, 16)
    with pytest.raises(ValueError):
        FbmSpec(0.5, 1)
    assert FbmSpec(0.5, 16).shape == (16,)
    assert FbmSpec(0.5, (4, 5)).shape == (4, 5)


def test_fgn_autocovariance_values():
    np.testing.assert_allclose(fgn_autocovariance(0.5, [0, 1, 2]), [1, 0, 0], atol=1e-15)
    # H = 0.75: rho(1) = (2^1.5 - 2) / 2
    assert fgn_autocovariance(0.75, 1) == pytest.approx((2 ** 1.5 - 2) / 2)


def test_deterministic():
    a = generate_fbm_1d(FbmSpec(0.3, 500, seed=9))
    b = generate_fbm_1d(FbmSpec(0.3, 500, seed=9))
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, generate_fbm_1d(FbmSpec(0.3, 500, seed=10)))
    f = generate_fbm_2d(FbmSpec(0.6, (20, 30), seed=1))
    np.testing.assert_array_equal(f, generate_fbm_2d(FbmSpec(0.6, (20, 30), seed=1)))
    assert f.shape == (20, 30) and f[0, 0] == 0.0


def test_brownian_increments_uncorrelated():
    m = 4096
    x = np.diff(np.r_[0.0, generate_fbm_1d(FbmSpec(0.5, m, seed=3))])
    r1 = np.corrcoef(x[:-1], x[1:])[0, 1]
    assert abs(r1) < 3 / np.sqrt(m)


def test_endpoint_variance():
    m = 4096
    ends = np.array([generate_fbm_1d(FbmSpec(0.7, m, seed=s))[-1] for s in range(200)])
    assert np.mean(ends ** 2) / m ** 1.4 == pytest.approx(1.0, rel=0.2)


def test_increment_moments_and_octave_scaling():
    H, m = 0.3, 4096
    incs, ratios = [], []
    for s in range(100):
        path = np.r_[0.0, generate_fbm_1d(FbmSpec(H, m, seed=s))]
        incs.append(np.diff(path))
        v1 = np.var(np.diff(path[::1]))
        v2 = np.var(np.diff(path[::2]))
        ratios.append(v2 / v1)
    x = np.concatenate(incs)
    z = (x - x.mean()) / x.std()
    assert abs(np.mean(z ** 3)) < 0.2
    assert abs(np.mean(z ** 4) - 3) < 0.5
    assert np.mean(ratios) == pytest.approx(2 ** (2 * H), rel=0.05)


def _check_cov(fields, pairs, hurst):
    """Empirical covariance within 4 standard errors of the closed form.

    With a few hundred draws a fixed relative band (15% say) is only about
    one standard error near the origin, so the bound is derived from the data.
    """
    for a, b in pairs:
        prods = np.array([f[a] * f[b] for f in fields])
        expected = fbm_covariance(hurst, np.array(a), np.array(b))
        se = prods.std() / np.sqrt(prods.size)
        assert abs(prods.mean() - expected) < 4 * se, (a, b, prods.mean(), expected, se)


@pytest.mark.parametrize("method", ["embedding", "cholesky"])
def test_2d_covariance_near_origin(method):
    shape = (32, 32) if method == "embedding" else (16, 16)
    fields = [generate_fbm_2d(FbmSpec(0.5, shape, seed=s), method=method) for s in range(1000)]
    _check_cov(fields, [((0, 1), (1, 0)), ((0, 1), (0, 1)), ((1, 1), (2, 3))], 0.5)


def test_2d_far_covariance():
    fields = [generate_fbm_2d(FbmSpec(0.8, (24, 24), seed=s)) for s in range(1000)]
    _check_cov(fields, [((23, 0), (0, 23)), ((23, 23), (23, 23)), ((10, 5), (3, 20))], 0.8)


def test_2d_cholesky_factor_is_exact():
    # feed unit vectors as the normal draws: the samples are then the factor's columns
    from ndqwt import fbm

    grid = np.stack(np.meshgrid(np.arange(4), np.arange(5), indexing="ij"), -1).reshape(-1, 2)
    cov = fbm_covariance(0.4, grid[:, None], grid[None, :])
    cols = []

    class Unit:
        def __init__(self, k):
            self.k = k

        def standard_normal(self, size):
            e = np.zeros(size)
            e[self.k] = 1.0
            return e

    for k in range(19):
        cols.append(fbm._fbm_2d_cholesky(0.4, 4, 5, Unit(k)).ravel())
    L = np.array(cols).T
    np.testing.assert_allclose(L @ L.T, cov, atol=1e-12)


def test_size_limits():
    with pytest.raises(SizeTooLarge):
        generate_fbm_2d(FbmSpec(0.5, (1024, 512)))
    with pytest.raises(SizeTooLarge):
        generate_fbm_2d(FbmSpec(0.5, (128, 128)), method="cholesky")
    with pytest.raises(ValueError):
        generate_fbm_2d(FbmSpec(0.5, (8, 8)), method="other")
