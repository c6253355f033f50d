import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chaoticlight.errors import StructuralError
from chaoticlight.fields import (
    ChaoticSpectrumSpec,
    FieldWaveform,
    LaserPulseSpec,
    ProbeSpec,
    chaotic_phases,
    make_all_harmonic_comb,
    make_odd_harmonic_comb,
    psd,
    sample_chaotic,
    sample_laser,
    sample_probe,
    time_lattice,
    zero_waveform,
)

SEED = 20260823
OMEGA0 = 0.057


class TestTimeLattice:
    def test_covers_final_time(self):
        t = time_lattice(0.05, 1102.3132)
        assert t[0] == 0.0
        assert t[-1] >= 1102.3132 - 1e-9
        assert t[-1] < 1102.3132 + 0.05
        assert np.allclose(np.diff(t), 0.05)

    def test_exact_multiple(self):
        t = time_lattice(0.5, 10.0)
        assert len(t) == 21
        assert t[-1] == 10.0

    def test_rejects_nonpositive(self):
        with pytest.raises(StructuralError):
            time_lattice(0.0, 1.0)
        with pytest.raises(StructuralError):
            time_lattice(0.1, -1.0)


class TestLaserPulse:
    def test_duration(self):
        spec = LaserPulseSpec(F0=0.02)
        assert np.isclose(spec.duration, 10 * 2 * np.pi / OMEGA0)

    def test_vanishes_at_endpoints_and_outside(self):
        spec = LaserPulseSpec(F0=0.06)
        times = time_lattice(0.1, 1.5 * spec.duration)
        wave = sample_laser(spec, times)
        assert wave.values[0] == 0.0
        outside = times >= spec.duration
        assert np.all(wave.values[outside] == 0.0)

    def test_peak_envelope_value(self):
        # at t = T_p/2 the envelope is 1, so F = F0 sin(w0 T_p/2 + delta)
        spec = LaserPulseSpec(F0=0.05, delta=0.3)
        t_half = spec.duration / 2.0
        times = np.array([0.0, t_half, spec.duration])
        wave = sample_laser(spec, times)
        expect = 0.05 * np.sin(OMEGA0 * t_half + 0.3)
        assert np.isclose(wave.values[1], expect)

    def test_bounded_by_amplitude(self):
        spec = LaserPulseSpec(F0=0.08)
        wave = sample_laser(spec, time_lattice(0.05, spec.duration))
        assert np.max(np.abs(wave.values)) <= 0.08 + 1e-12

    def test_lattice_must_cover_pulse(self):
        spec = LaserPulseSpec(F0=0.02)
        with pytest.raises(StructuralError):
            sample_laser(spec, time_lattice(0.1, spec.duration / 2))

    def test_rejects_negative_amplitude(self):
        with pytest.raises(StructuralError):
            LaserPulseSpec(F0=-0.1)


class TestProbe:
    def test_matches_zero_phase_laser(self):
        pulse = LaserPulseSpec(F0=0.02)
        times = time_lattice(0.1, pulse.duration)
        probe = sample_probe(ProbeSpec(omega_p=0.3, F_p=0.0005), pulse, times)
        same = sample_laser(
            LaserPulseSpec(F0=0.0005, omega0=0.3, n_cycles=pulse.n_cycles * 300 // 57),
            times,
        )
        # same formula, same envelope duration is enforced via the pulse spec
        expect = np.sin(np.pi * times / pulse.duration) ** 2 * 0.0005 * np.sin(0.3 * times)
        expect[times >= pulse.duration] = 0.0
        assert np.allclose(probe.values, expect)

    def test_rejects_nonpositive_parameters(self):
        with pytest.raises(StructuralError):
            ProbeSpec(omega_p=0.0)
        with pytest.raises(StructuralError):
            ProbeSpec(omega_p=0.3, F_p=0.0)


class TestChaoticSpectrumSpec:
    def test_flat_band_modes_exclude_dc(self):
        spec = ChaoticSpectrumSpec(
            kind="flat_band", F_rms=0.01, omega_min=0.0, omega_max=0.5, n_modes=10
        )
        freqs = spec.mode_frequencies()
        assert len(freqs) == 10
        assert np.all(freqs > 0)
        # midpoint lattice: omega_min + (n - 1/2) * dw
        assert np.isclose(freqs[0], 0.025)
        assert np.isclose(freqs[-1], 0.475)
        assert np.isclose(spec.bandwidth, 0.5)

    def test_centered_band(self):
        spec = ChaoticSpectrumSpec(
            kind="centered_band", F_rms=0.01, center=0.267, width=0.015, n_modes=8
        )
        freqs = spec.mode_frequencies()
        assert np.isclose(freqs.mean(), 0.267)
        assert np.all(freqs > 0.267 - 0.0075)
        assert np.all(freqs < 0.267 + 0.0075)
        assert np.isclose(spec.bandwidth, 0.015)

    def test_odd_comb(self):
        spec = make_odd_harmonic_comb(f_rms=0.01)
        assert spec.n_modes == 6
        assert np.allclose(
            spec.mode_frequencies(), np.array([3, 5, 7, 9, 11, 13]) * OMEGA0
        )

    def test_all_comb(self):
        spec = make_all_harmonic_comb(f_rms=0.01)
        assert np.allclose(
            spec.mode_frequencies(), np.array([3, 4, 5, 6, 7, 8]) * OMEGA0
        )

    def test_rejects_bad_specs(self):
        with pytest.raises(StructuralError):
            ChaoticSpectrumSpec(kind="flat_band", F_rms=0.01, omega_min=0.5, omega_max=0.1)
        with pytest.raises(StructuralError):
            ChaoticSpectrumSpec(kind="harmonic_comb", F_rms=0.01, comb=())
        with pytest.raises(StructuralError):
            ChaoticSpectrumSpec(kind="banded", F_rms=0.01)
        with pytest.raises(StructuralError):
            ChaoticSpectrumSpec(kind="flat_band", F_rms=-0.01, omega_min=0.0, omega_max=0.5)


class TestChaoticSampling:
    def spec(self, n_modes=16, f_rms=0.01):
        return ChaoticSpectrumSpec(
            kind="flat_band", F_rms=f_rms, omega_min=0.0, omega_max=0.5, n_modes=n_modes
        )

    def test_single_mode_matches_formula(self):
        spec = ChaoticSpectrumSpec(
            kind="harmonic_comb", F_rms=0.01, comb=(0.3,)
        )
        times = time_lattice(0.1, 200.0)
        phase = chaotic_phases(spec, SEED, 0)[0]
        wave = sample_chaotic(spec, times, SEED, 0)
        expect = np.sqrt(2.0) * 0.01 * np.sin(0.3 * times + phase)
        assert np.allclose(wave.values, expect)

    def test_bitwise_determinism(self):
        times = time_lattice(0.1, 300.0)
        a = sample_chaotic(self.spec(), times, SEED, 3)
        b = sample_chaotic(self.spec(), times, SEED, 3)
        assert np.array_equal(a.values, b.values)

    def test_realizations_differ(self):
        times = time_lattice(0.1, 300.0)
        a = sample_chaotic(self.spec(), times, SEED, 0)
        b = sample_chaotic(self.spec(), times, SEED, 1)
        assert not np.allclose(a.values, b.values)

    def test_realization_independent_of_order(self):
        # drawing realization 5 directly equals drawing it after others
        p_direct = chaotic_phases(self.spec(), SEED, 5)
        for r in (0, 2, 5):
            p = chaotic_phases(self.spec(), SEED, r)
        assert np.array_equal(p, p_direct)

    def test_support_window(self):
        times = time_lattice(0.1, 500.0)
        wave = sample_chaotic(self.spec(), times, SEED, 0, support=(0.0, 200.0))
        assert np.all(wave.values[times > 200.0] == 0.0)
        assert np.any(wave.values[times <= 200.0] != 0.0)

    def test_ensemble_mean_and_rms(self):
        # stationarity oracle: mean 0, variance F_rms^2 independent of N
        spec = self.spec(n_modes=32, f_rms=0.004)
        times = time_lattice(0.5, 400.0)
        probes = [100, 300, 500]
        n_ens = 400
        samples = np.array(
            [sample_chaotic(spec, times, SEED, r).values[probes] for r in range(n_ens)]
        )
        mean = samples.mean(axis=0)
        rms = np.sqrt((samples**2).mean())
        se = 0.004 / np.sqrt(n_ens)
        assert np.all(np.abs(mean) < 4 * se)
        assert abs(rms - 0.004) / 0.004 < 0.05

    def test_rms_independent_of_mode_count(self):
        times = time_lattice(0.5, 600.0)
        rms = []
        for n_modes in (8, 128):
            spec = self.spec(n_modes=n_modes, f_rms=0.01)
            s = np.array(
                [sample_chaotic(spec, times, SEED, r).values for r in range(200)]
            )
            rms.append(np.sqrt((s**2).mean()))
        assert abs(rms[0] - rms[1]) / 0.01 < 0.05

    def test_odd_comb_half_cycle_periodic(self):
        # odd harmonics of w0: Z(t + pi/w0) = -Z(t), so |Z| has period pi/w0
        spec = make_odd_harmonic_comb(f_rms=0.01)
        period = np.pi / OMEGA0
        dt = period / 64
        times = np.arange(0, 4 * period, dt)
        z = sample_chaotic(spec, times, SEED, 0, support=(0.0, times[-1])).values
        n = 64
        assert np.allclose(z[n : 3 * n], -z[:  2 * n], atol=1e-10)

    def test_all_comb_full_cycle_periodic(self):
        spec = make_all_harmonic_comb(f_rms=0.01)
        period = 2 * np.pi / OMEGA0
        dt = period / 64
        times = np.arange(0, 3 * period, dt)
        z = sample_chaotic(spec, times, SEED, 0, support=(0.0, times[-1])).values
        n = 64
        assert np.allclose(z[n : 2 * n], z[:n], atol=1e-10)


class TestPsd:
    def test_single_sine_dominant_bin(self):
        times = time_lattice(0.1, 2000.0)
        w0 = 0.3
        wave = FieldWaveform(times, 0.01 * np.sin(w0 * times))
        omega, power = psd([wave])
        i = int(np.argmax(power))
        assert abs(omega[i] - w0) < omega[1]

    def test_flat_band_in_out_ratio(self):
        spec = ChaoticSpectrumSpec(
            kind="flat_band", F_rms=0.005, omega_min=0.1, omega_max=0.4, n_modes=128
        )
        times = time_lattice(0.2, 4000.0)
        ens = [sample_chaotic(spec, times, SEED, r) for r in range(50)]
        omega, power = psd(ens)
        pad = 0.03  # spectral leakage margin around the band edges
        inside = (omega >= 0.1 + pad) & (omega <= 0.4 - pad)
        outside = (omega > 0.4 + pad) | ((omega < 0.1 - pad) & (omega > 0))
        ratio = power[inside].mean() / power[outside].mean()
        assert ratio > 100

    def test_parseval_mean_power(self):
        # the PSD is a mean-power density: 2 * integral(P) d(omega/2pi) = F_rms^2
        spec = ChaoticSpectrumSpec(
            kind="flat_band", F_rms=0.01, omega_min=0.05, omega_max=0.5, n_modes=64
        )
        times = time_lattice(0.2, 3000.0)
        ens = [sample_chaotic(spec, times, SEED, r) for r in range(100)]
        omega, power = psd(ens)
        total = 2 * power.sum() * (omega[1] - omega[0]) / (2 * np.pi)
        assert abs(total - 0.01**2) / 0.01**2 < 0.05

    def test_requires_identical_lattices(self):
        a = zero_waveform(time_lattice(0.1, 10.0))
        b = zero_waveform(time_lattice(0.1, 20.0))
        with pytest.raises(StructuralError):
            psd([a, b])

    def test_rejects_empty_ensemble(self):
        with pytest.raises(StructuralError):
            psd([])


class TestWaveformValidation:
    def test_shape_mismatch(self):
        with pytest.raises(StructuralError):
            FieldWaveform(np.zeros(4), np.zeros(5))

    def test_nonfinite_rejected(self):
        with pytest.raises(StructuralError):
            FieldWaveform(np.zeros(3), np.array([0.0, np.nan, 0.0]))


@settings(max_examples=20, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**31),
    realization=st.integers(min_value=0, max_value=1000),
)
def test_phases_in_range(seed, realization):
    spec = ChaoticSpectrumSpec(
        kind="flat_band", F_rms=0.01, omega_min=0.0, omega_max=0.5, n_modes=32
    )
    p = chaotic_phases(spec, seed, realization)
    assert p.shape == (32,)
    assert np.all((p >= 0) & (p < 2 * np.pi))
