import numpy as np
import pytest

from qfilter import classical
from qfilter.exceptions import ShapeMismatchError


@pytest.mark.parametrize("size", [1, 2, 13, 16, 300])
def test_dft_matches_numpy(rng, size):
    values = rng.normal(size=size) + 1j * rng.normal(size=size)

    np.testing.assert_allclose(classical.dft(values), np.fft.fft(values), atol=1e-9)
    np.testing.assert_allclose(classical.idft(classical.dft(values)), values, atol=1e-9)


def test_parseval(rng):
    values = rng.normal(size=64)

    bins = classical.dft(values)

    assert np.sum(np.abs(bins) ** 2) == pytest.approx(64 * np.sum(values**2))


def test_conjugate_symmetry(rng):
    values = rng.normal(size=32)

    bins = classical.dft(values)

    np.testing.assert_allclose(bins[1:], np.conj(bins[1:][::-1]), atol=1e-9)


def test_walkthrough_dc_bin(walkthrough):
    assert classical.dft(walkthrough)[0] == pytest.approx(2)


@pytest.mark.parametrize("size", [5, 8])
def test_fft_shift(size):
    np.testing.assert_array_equal(classical.fft_shift(np.arange(size)), np.fft.fftshift(np.arange(size)))


def test_mask_zeroes_only_listed_bins(rng):
    bins = rng.normal(size=8) + 1j

    masked = classical.apply_mask(bins, [0, 7, 7])

    assert masked[0] == 0
    assert masked[7] == 0
    np.testing.assert_array_equal(masked[1:7], bins[1:7])


def test_mask_outside_range():
    with pytest.raises(ShapeMismatchError):
        classical.apply_mask(np.ones(16), [16])


def test_empty_signal():
    with pytest.raises(ShapeMismatchError):
        classical.dft([])


def test_dft2_matches_numpy(rng):
    grid = rng.normal(size=(8, 8))

    np.testing.assert_allclose(classical.dft2(grid), np.fft.fft2(grid), atol=1e-9)
    np.testing.assert_allclose(classical.idft2(classical.dft2(grid)), grid, atol=1e-9)


def test_filter_reference_keeps_unmasked_spectrum(rng):
    values = rng.normal(size=16)

    filtered = classical.filter_reference(values, [0])

    assert np.mean(filtered.real) == pytest.approx(0, abs=1e-12)
    np.testing.assert_allclose(filtered.real, values - values.mean(), atol=1e-12)
