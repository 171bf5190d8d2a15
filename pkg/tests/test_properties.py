"""Property-based checks over the integer pipeline."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hklut.engine import div_round, lut_index, split_nibbles
from hklut.model import BUILTIN_PATTERNS, builtin_pattern, rotate_pattern

planes = arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12)))


@given(st.sampled_from(sorted(BUILTIN_PATTERNS)), st.integers(0, 3), st.integers(0, 3))
def test_rotation_composes_mod_four(name, a, b):
    p = builtin_pattern(name)
    lhs = rotate_pattern(rotate_pattern(p, a), b)
    rhs = rotate_pattern(p, (a + b) % 4)
    assert lhs.offsets == rhs.offsets


@given(st.integers(-10_000, 10_000), st.integers(1, 64))
def test_div_round_matches_float_half_away(s, d):
    want = int(np.floor(abs(s) / d + 0.5)) * (1 if s >= 0 else -1)
    assert int(div_round(np.array([s]), d)[0]) == want


@given(st.lists(st.integers(0, 15), min_size=1, max_size=4), st.integers(16, 17))
def test_lut_index_is_positional(values, v):
    idx = lut_index(values, v)
    assert 0 <= idx < v ** len(values)
    # decode back
    decoded = []
    for _ in values:
        decoded.append(idx % v)
        idx //= v
    assert list(reversed(decoded)) == values


@settings(max_examples=30)
@given(planes)
def test_split_nibbles_bounds_and_recombine(img):
    msb, lsb = split_nibbles(img)
    assert msb.max(initial=0) <= 15 and lsb.max(initial=0) <= 15
    assert np.array_equal((msb.astype(np.uint8) << 4) | lsb, img)


@settings(max_examples=15, deadline=None)
@given(planes, st.integers(0, 2 ** 32 - 1))
def test_engine_matches_reference(img, seed):
    from hklut.engine import model_forward
    from hklut.reference import reference_forward
    from hklut.verify import random_model
    model = random_model(np.random.default_rng(seed), max_stages=2)
    assert np.array_equal(model_forward(img, model), reference_forward(img, model))
