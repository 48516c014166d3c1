import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pbsim.errors import NonFiniteParameterError, NonPositiveKappaError, RegimeWarning
from pbsim.params import (
    SystemParams,
    Truncation,
    default_1pb_params,
    default_2pb_params,
    regime_warnings,
    validate,
)


class TestDefaults:
    def test_1pb_ratios(self):
        p = default_1pb_params()
        assert p.g / p.omega_m == pytest.approx(0.05)
        assert p.drive / p.kappa == pytest.approx(0.05)
        assert p.omega_m / p.kappa == pytest.approx(100.0)
        assert p.gamma_m / p.omega_m == pytest.approx(1e-6)

    def test_1pb_canonical_kappa(self):
        assert default_1pb_params().kappa == 1.0

    def test_1pb_gamma_m_in_kappa_units(self):
        # gamma_m = 1e-6 * omega_m with omega_m = 100 kappa
        assert default_1pb_params().gamma_m == pytest.approx(1e-4)

    def test_1pb_pump_zero_initialized(self):
        p = default_1pb_params()
        assert p.gain == 0.0 and p.theta == 0.0 and p.delta_c == 0.0

    def test_2pb_kerr_is_unit(self):
        p = default_2pb_params()
        assert p.g**2 / p.omega_m == pytest.approx(1.0)
        assert p.drive / p.kappa == pytest.approx(0.05)
        assert p.kappa == 1.0


class TestNormalization:
    def test_normalize_rescales_to_kappa(self):
        p = SystemParams(delta_c=2.0, omega_m=200.0, g=10.0, gain=0.2, theta=1.0,
                         drive=0.1, kappa=2.0, gamma_m=2e-4)
        n = p.normalized()
        assert n.kappa == 1.0
        assert n.omega_m == pytest.approx(100.0)
        assert n.delta_c == pytest.approx(1.0)
        assert n.theta == p.theta

    @settings(max_examples=50, deadline=None)
    @given(
        kappa=st.floats(1e-6, 1e6),
        delta_c=st.floats(-100, 100),
        drive=st.floats(0, 10),
    )
    def test_normalize_idempotent(self, kappa, delta_c, drive):
        p = SystemParams(delta_c=delta_c, drive=drive, kappa=kappa)
        once = p.normalized()
        assert once.normalized() == once

    def test_normalize_rejects_zero_kappa(self):
        with pytest.raises(NonPositiveKappaError):
            SystemParams(kappa=0.0).normalized()

    @given(theta=st.floats(-50.0, 50.0))
    @settings(max_examples=50, deadline=None)
    def test_theta_stored_reduced(self, theta):
        p = SystemParams(theta=theta)
        assert 0.0 <= p.theta < 2.0 * math.pi


class TestValidation:
    def test_defaults_valid_without_warnings(self, recwarn):
        validate(default_1pb_params())
        assert not [w for w in recwarn if issubclass(w.category, RegimeWarning)]

    def test_strong_drive_warns_but_validates(self):
        p = SystemParams(drive=0.5)
        with pytest.warns(RegimeWarning, match="weak-drive"):
            assert validate(p) == p

    def test_strong_pump_and_coupling_warn(self):
        notes = regime_warnings(SystemParams(gain=0.2, g=30.0))
        assert len(notes) == 2

    def test_zero_kappa_is_hard_error(self):
        with pytest.raises(NonPositiveKappaError):
            validate(SystemParams(kappa=0.0))

    def test_non_finite_is_hard_error(self):
        with pytest.raises(NonFiniteParameterError):
            validate(SystemParams(delta_c=float("nan")))
        with pytest.raises(NonFiniteParameterError):
            validate(SystemParams(drive=float("inf")))

    @pytest.mark.parametrize("field,value", [
        ("gain", -0.1), ("drive", -1.0), ("omega_m", 0.0), ("gamma_m", -1e-3),
    ])
    def test_range_errors(self, field, value):
        with pytest.raises(ValueError):
            validate(SystemParams(**{field: value}))

    def test_validate_never_mutates(self):
        p = SystemParams(drive=0.5)
        with pytest.warns(RegimeWarning):
            out = validate(p)
        assert out is p


class TestSerialization:
    def test_round_trip(self):
        p = SystemParams(delta_c=-1.5, theta=2.5, gain=0.01)
        assert SystemParams.from_json(p.to_json()) == p

    def test_unknown_keys_rejected(self):
        data = default_1pb_params().to_dict()
        data["temperature"] = 1.0
        with pytest.raises(ValueError, match="unknown"):
            SystemParams.from_dict(data)

    def test_missing_keys_rejected(self):
        data = default_1pb_params().to_dict()
        del data["kappa"]
        with pytest.raises(ValueError, match="missing"):
            SystemParams.from_dict(data)

    def test_json_is_flat(self):
        parsed = json.loads(default_1pb_params().to_json())
        assert all(isinstance(v, float) for v in parsed.values())


class TestTruncation:
    def test_dims(self):
        t = Truncation(8, 6)
        assert t.dim_photon == 9 and t.dim_phonon == 7
        assert t.dim == 63 and t.dim > 0

    def test_photon_cutoff_floor(self):
        # the perturbative path needs amplitudes through the 3-photon state
        with pytest.raises(ValueError):
            Truncation(2, 0)
        Truncation(3, 0)

    def test_phonon_cutoff_floor(self):
        with pytest.raises(ValueError):
            Truncation(4, -1)
        assert Truncation(4, 0).dim == 5
