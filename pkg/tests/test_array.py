import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h2ad.array import (
    ArrayConfig,
    GroupConfig,
    reference_config,
    steering_vector,
    subarray_gain,
    subarray_gain_direct,
    virtual_steering_vector,
)
from h2ad.signal import group_signal_term
from oracles import group_response

angles = st.floats(-math.pi / 2, math.pi / 2, allow_nan=False)

# direct sum of exp(j pi m sin 41deg), m = 0..6, frozen from the oracle
GAIN_7_AT_41 = complex(0.930473824448805, -0.09333494215497623)


def test_group_config_invariants():
    with pytest.raises(ValueError):
        GroupConfig(1, 7)
    with pytest.raises(ValueError):
        GroupConfig(4, 0)
    assert GroupConfig(16, 7).antenna_count == 112


def test_array_config_rejects_repeated_sizes_unless_allowed():
    with pytest.raises(ValueError):
        ArrayConfig.from_sizes(16, (7, 7, 13))
    arr = ArrayConfig.from_sizes(16, (7, 7, 13), allow_homogeneous=True)
    assert arr.group_count == 3


def test_array_config_rejects_wide_spacing():
    with pytest.raises(ValueError):
        ArrayConfig.from_sizes(16, (7, 11), element_spacing=0.6)


def test_antenna_total(reference_array):
    assert reference_array.antenna_count == sum(g.subarray_count * g.antennas_per_subarray for g in reference_array.groups)
    assert reference_array.antenna_count == 16 * 31


def test_group_index_and_angle_checks(reference_array):
    with pytest.raises(IndexError):
        steering_vector(reference_array, 3, 0.0)
    with pytest.raises(ValueError):
        steering_vector(reference_array, 0, 2.0)


def test_steering_boresight_is_ones(reference_array):
    np.testing.assert_array_equal(steering_vector(reference_array, 1, 0.0), np.ones(16 * 11))
    np.testing.assert_array_equal(virtual_steering_vector(reference_array, 1, 0.0), np.ones(16))


def test_two_element_endfire():
    arr = ArrayConfig.from_sizes(2, (1,))
    np.testing.assert_allclose(steering_vector(arr, 0, math.pi / 2), [1, -1], atol=1e-15)


def test_steering_phases_at_41deg():
    arr = ArrayConfig.from_sizes(4, (1,))
    a = steering_vector(arr, 0, math.radians(41))
    step = math.pi * math.sin(math.radians(41))
    np.testing.assert_allclose(a, np.exp(1j * step * np.arange(4)), atol=1e-14)


def test_virtual_endfire_wraps():
    arr = ArrayConfig.from_sizes(2, (2,))
    np.testing.assert_allclose(virtual_steering_vector(arr, 0, math.pi / 2), [1, 1], atol=1e-14)


def test_virtual_unit_modulus(reference_array):
    v = virtual_steering_vector(reference_array, 0, math.radians(41))
    assert v.shape == (16,)
    np.testing.assert_allclose(np.abs(v), 1.0, atol=1e-12)


def test_gain_special_values(reference_array):
    assert subarray_gain(reference_array, 0, 0.0) == 7 + 0j
    arr = ArrayConfig.from_sizes(4, (1,))
    assert subarray_gain(arr, 0, 0.7) == 1 + 0j


def test_gain_closed_form_frozen(reference_array):
    g = subarray_gain(reference_array, 0, math.radians(41))
    assert abs(g - GAIN_7_AT_41) < 1e-12


def test_gain_closed_form_matches_direct_sum_on_grid(reference_array):
    for theta in np.linspace(-math.pi / 2, math.pi / 2, 1000):
        for q in range(3):
            assert abs(subarray_gain(reference_array, q, theta) - subarray_gain_direct(reference_array, q, theta)) < 1e-12


@given(theta=angles, m=st.integers(1, 25), k=st.integers(2, 20))
def test_unit_modulus_and_gain_bound(theta, m, k):
    arr = ArrayConfig.from_sizes(k, (m,))
    a = steering_vector(arr, 0, theta)
    assert a.size == k * m
    assert np.all(np.abs(np.abs(a) - 1) < 1e-12)
    assert a[0] == 1
    assert abs(subarray_gain(arr, 0, theta)) <= m + 1e-9


@settings(max_examples=50)
@given(theta=angles, q=st.integers(0, 2))
def test_signal_term_equals_subsampled_full_aperture(theta, q):
    reference_array = reference_config()
    g = reference_array.group(q)
    expected = group_response(g.subarray_count, g.antennas_per_subarray, 0.5, theta)
    np.testing.assert_allclose(group_signal_term(reference_array, q, theta), expected, atol=1e-10)
    # the virtual manifold is the full steering vector at stride M_q
    full = steering_vector(reference_array, q, theta)
    np.testing.assert_allclose(virtual_steering_vector(reference_array, q, theta), full[:: g.antennas_per_subarray], atol=1e-12)
