import numpy as np
import pytest
from hypothesis import given, strategies as st

from dcapolar.channel import ChannelParams, SnrKind, frame_rng, llr, modulate, transmit


def test_modulate_mapping():
    assert modulate([0, 1, 1, 0]).tolist() == [1.0, -1.0, -1.0, 1.0]


@pytest.mark.parametrize("snr_db, sigma2", [(0.0, 0.5), (10 * np.log10(0.5), 1.0), (10.0, 0.05)])
def test_sigma2_from_esn0(snr_db, sigma2):
    assert ChannelParams(snr_db).sigma2 == pytest.approx(sigma2)


def test_ebn0_uses_rate():
    p = ChannelParams(3.0, SnrKind.EB_N0, 0.5)
    assert p.esn0_db == pytest.approx(3.0 + 10 * np.log10(0.5))
    assert p.sigma2 == pytest.approx(1 / (2 * 0.5 * 10**0.3))
    with pytest.raises(ValueError):
        ChannelParams(1.0, "EbN0", 0.0)


def test_llr_values():
    p = ChannelParams(0.0)  # sigma2 = 0.5
    assert llr([1.0, -0.25, 0.0], p).tolist() == pytest.approx([4.0, -1.0, 0.0])


@given(st.floats(-20, 20), st.floats(-5, 5))
def test_llr_sign_and_scale(snr, y):
    p = ChannelParams(snr)
    v = llr([y], p)[0]
    assert np.sign(v) == np.sign(y)
    assert v == pytest.approx(2 * y / p.sigma2)


def test_noise_variance():
    p = ChannelParams(-3.0)
    y = transmit(np.zeros(1_000_000), p, frame_rng(5, 0))
    assert abs(y.var() / p.sigma2 - 1) < 0.01
    assert abs(y.mean()) < 0.01


def test_streams_are_deterministic_and_distinct():
    a = frame_rng(1, 10, 2).standard_normal(8)
    assert np.array_equal(a, frame_rng(1, 10, 2).standard_normal(8))
    for other in (frame_rng(1, 11, 2), frame_rng(1, 10, 3), frame_rng(2, 10, 2)):
        assert not np.array_equal(a, other.standard_normal(8))
