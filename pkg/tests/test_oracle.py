"""Reference implementations: exhaustive LUT fabrication and engine twin."""

import itertools

import numpy as np
import pytest

from hklut.engine import model_forward
from hklut.model import preset_model
from hklut.reference import build_lut_from_function, lookup, reference_forward
from hklut.resample import upsample_plane
from hklut.verify import random_image, random_model


def test_build_zero_function():
    table = build_lut_from_function(lambda t: np.zeros((2, 2)), 16, 2, 2)
    assert not table.entries.any()


def test_build_lookup_exhaustive_n2():
    def f(t):
        return np.full((2, 2), (t[0] - t[1]))
    table = build_lut_from_function(f, 16, 2, 2)
    for t in itertools.product(range(16), repeat=2):
        assert np.array_equal(lookup(table, t), f(t))


def test_build_lookup_exhaustive_n3():
    def f(t):
        return np.array([[t[0], t[1]], [t[2], (t[0] + t[1] + t[2]) % 16]])
    table = build_lut_from_function(f, 16, 3, 2)
    for t in itertools.product(range(16), repeat=3):
        assert np.array_equal(lookup(table, t), f(t))


def test_build_signed_difference_spot_value():
    def f(t):
        return np.full((2, 2), max(-127, min(127, t[0] - t[1])))
    table = build_lut_from_function(f, 16, 2, 2)
    assert (lookup(table, (15, 0)) == 15).all()
    assert (lookup(table, (0, 15)) == -15).all()


def test_build_rejects_out_of_range():
    with pytest.raises(ValueError):
        build_lut_from_function(lambda t: np.full((1, 1), 200), 16, 2, 1)


def test_reference_zero_lut_is_nearest():
    rng = np.random.default_rng(0)
    img = random_image(rng, 10)
    assert np.array_equal(reference_forward(img, preset_model("hklut-s")),
                          upsample_plane(img, 4, "nearest"))


def test_reference_matches_engine_randomized():
    rng = np.random.default_rng(1)
    for _ in range(20):
        model = random_model(rng)
        img = random_image(rng, 16)
        assert np.array_equal(model_forward(img, model),
                              reference_forward(img, model))


def test_reference_handles_single_pixel():
    rng = np.random.default_rng(2)
    model = random_model(rng)
    img = np.array([[200]], dtype=np.uint8)
    assert np.array_equal(model_forward(img, model),
                          reference_forward(img, model))
