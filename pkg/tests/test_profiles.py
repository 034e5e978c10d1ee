from __future__ import annotations

import numpy as np
import pytest

from fujitalab import (
    ProfileSpec,
    SuperSolutionParams,
    bump,
    gaussian,
    gaussian_value,
    parse_profile,
    supersolution_matched,
)


def test_gaussian_values():
    phi = gaussian(2.0, 1.0)
    assert phi(np.array([0.0]))[0] == 2.0
    assert phi(np.array([2.0]))[0] == pytest.approx(2.0 / np.e, rel=1e-14)


def test_gaussian_validation():
    with pytest.raises(ValueError):
        gaussian(-1.0, 1.0)
    with pytest.raises(ValueError):
        gaussian(1.0, 0.0)


def test_bump_support_and_peak():
    phi = bump(3.0, 5.0, 2.0)
    r = np.array([2.9, 3.0, 5.0, 7.0, 7.1])
    vals = phi(r)
    assert vals[0] == 0.0 and vals[-1] == 0.0
    assert vals[1] == 0.0 and vals[3] == 0.0  # support edge included
    assert vals[2] == 3.0
    inside = phi(np.linspace(3.1, 6.9, 50))
    assert np.all(inside > 0.0)


def test_bump_validation():
    with pytest.raises(ValueError):
        bump(1.0, 5.0, -1.0)


def test_matched_profile_equals_barrier_at_time_zero():
    params = SuperSolutionParams(amplitude=0.45, t0=1.0, mu=1.0, p=2.0)
    phi = supersolution_matched(params)
    r = np.linspace(1.0, 10.0, 40)
    assert np.array_equal(phi(r), gaussian_value(params, r, 0.0))


def test_profile_spec_arity():
    ProfileSpec("gaussian", (1.0, 2.0))
    ProfileSpec("bump", (1.0, 5.0, 2.0))
    ProfileSpec("supersolution", (0.9,))
    with pytest.raises(ValueError):
        ProfileSpec("gaussian", (1.0,))
    with pytest.raises(ValueError):
        ProfileSpec("mystery", (1.0,))


def test_parse_profile_round_trip():
    for text in ("gaussian:0.2,1.0", "bump:1.0,5.0,2.0", "supersolution:0.9"):
        prof = parse_profile(text)
        assert parse_profile(prof.spec_string()) == prof


def test_parse_profile_errors():
    with pytest.raises(ValueError, match="gaussian"):
        parse_profile("mystery:1.0")
    with pytest.raises(ValueError):
        parse_profile("gaussian:1.0,2.0,3.0")


def test_with_amplitude():
    prof = parse_profile("gaussian:0.2,1.0")
    bigger = prof.with_amplitude(0.8)
    assert bigger.params == (0.8, 1.0)
    assert prof.params == (0.2, 1.0)
