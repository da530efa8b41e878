import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from finitegap_nls.errors import ContourProximityError, SchemaError
from finitegap_nls.scattering import (log_one_plus_rsq, make_rational_r, scattering_from_config,
                                      zero_reflection)


def test_zero_amplitude_is_reflectionless():
    r = make_rational_r(0.0, 1.0)
    assert r.is_zero and np.all(r.r(np.linspace(-3, 3, 7)) == 0)
    assert np.all(log_one_plus_rsq(zero_reflection(), np.linspace(-2, 2, 5)) == 0)


def test_decay_rate():
    r = make_rational_r(0.5, 2.0, 0.3)
    v = [abs(r.r(x)) * x for x in (1e3, 1e4, 1e5)]
    assert abs(v[2] - 1.0) < 1e-3 and abs(v[0] - v[2]) < 1e-2


def test_schwarz_partner_on_real_line():
    r = make_rational_r(0.5, 2.0, 0.3)
    assert r.schwarz_residual(np.linspace(-10, 10, 100)) == 0.0


@given(st.floats(-20, 20), st.floats(0.01, 1.0), st.floats(1.0, 3.0))
@settings(max_examples=40, deadline=None)
def test_log_weight_monotone_in_amplitude(x, amp, factor):
    lo = make_rational_r(amp, 1.5)
    hi = make_rational_r(amp * factor, 1.5)
    assert log_one_plus_rsq(hi, x) >= log_one_plus_rsq(lo, x) >= 0


def test_log_weight_matches_real_formula():
    r = make_rational_r(0.4, 1.5, 0.2)
    x = np.linspace(-5, 5, 11)
    assert np.allclose(r.log_weight(x).real, log_one_plus_rsq(r, x), atol=1e-15)


def test_strip_guard():
    r = make_rational_r(0.4, 1.0)
    with pytest.raises(ContourProximityError):
        r.log_weight(0.5 + 0.99j)


def test_config_parsing():
    r = scattering_from_config({"family": "rational", "amplitude": 0.5, "pole_scale": 2.0})
    assert r.amplitude == 0.5 and r.pole_scale == 2.0
    assert scattering_from_config(None).is_zero
    with pytest.raises(SchemaError):
        scattering_from_config({"family": "gaussian"})
    with pytest.raises(SchemaError):
        scattering_from_config({"family": "rational", "amplitude": -1})
    with pytest.raises(SchemaError):
        make_rational_r(0.5, 0.0)
