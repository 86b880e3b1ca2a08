"""Tests for recordings: NDLR files, montages, filtering and segmentation."""

import os
import stat

import numpy as np
import pytest

from errors import CorruptionError, FormatError, MontageError, ParameterError, ValidationError
from recording import (
    COMMON_AVERAGE,
    MontageSpec,
    Recording,
    apply_montage,
    bandpass_filter,
    load_montage,
    preprocess_recording,
    read_recording,
    segment_stream,
    split_window,
    join_window,
    standardize_segment,
    write_recording,
)
from recording.container import MAGIC, encode_recording, header_size
from recording.montage import electrode_label


def _recording(samples, fs=256.0, names=None):
    samples = np.asarray(samples, dtype=np.float64)
    names = names or [f"C{i}" for i in range(samples.shape[0])]
    return Recording(samples=samples, fs=fs, channel_names=tuple(names))


class TestRecordingType:

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValidationError):
            Recording(samples=np.zeros((2, 4)), fs=256.0, channel_names=('A', 'A'))

    def test_bad_rate_rejected(self):
        with pytest.raises(ValidationError):
            Recording(samples=np.zeros((1, 4)), fs=0.0, channel_names=('A',))

    def test_samples_read_only(self):
        r = _recording(np.zeros((1, 4)))
        with pytest.raises(ValueError):
            r.samples[0, 0] = 1.0


class TestContainer:

    def test_round_trip_bitwise(self, tmp_path):
        rng = np.random.default_rng(0)
        samples = rng.standard_normal((3, 50)).astype(np.float32).astype(np.float64)
        r = _recording(samples, fs=250.0, names=['EEG FP1-REF', 'EEG F7-REF', 'Cz'])
        path = tmp_path / 'r.ndlr'
        write_recording(r, path)
        back = read_recording(path)
        assert back.channel_names == r.channel_names
        assert back.fs == r.fs
        assert np.array_equal(back.samples, r.samples)

    def test_file_size(self, tmp_path):
        r = _recording(np.arange(4.0)[None], names=['A'])
        path = tmp_path / 'r.ndlr'
        write_recording(r, path)
        assert os.path.getsize(path) == header_size(['A']) + 16

    def test_bad_magic(self, tmp_path):
        data = bytearray(encode_recording(_recording(np.zeros((1, 4)))))
        data[:4] = b'XXXX'
        path = tmp_path / 'bad.ndlr'
        path.write_bytes(bytes(data))
        with pytest.raises(FormatError):
            read_recording(path)

    def test_truncated_payload(self, tmp_path):
        data = encode_recording(_recording(np.zeros((2, 8))))
        # header claims two channels, payload holds one
        path = tmp_path / 'short.ndlr'
        path.write_bytes(data[:-8 * 4])
        with pytest.raises(CorruptionError):
            read_recording(path)

    def test_magic_constant(self):
        assert encode_recording(_recording(np.zeros((1, 1))))[:4] == MAGIC

    @pytest.mark.skipif(os.geteuid() == 0, reason="root ignores file permissions")
    def test_unwritable_path(self, tmp_path):
        locked = tmp_path / 'locked'
        locked.mkdir()
        locked.chmod(stat.S_IRUSR | stat.S_IXUSR)
        with pytest.raises(OSError):
            write_recording(_recording(np.zeros((1, 4))), locked / 'r.ndlr')


class TestMontage:

    def test_electrode_label(self):
        assert electrode_label('EEG FP1-REF') == 'FP1'
        assert electrode_label('fp1') == 'FP1'

    def test_tcp_first_channel(self):
        montage = load_montage('tcp')
        names = ['EEG FP1-REF', 'EEG F7-REF'] + [f'EEG {n}-REF' for n in
                                                 ('T3', 'T5', 'O1', 'FP2', 'F8', 'T4', 'T6', 'O2',
                                                  'A1', 'A2', 'C3', 'CZ', 'C4', 'F3', 'F4', 'P3',
                                                  'P4')]
        rng = np.random.default_rng(1)
        r = _recording(rng.standard_normal((len(names), 32)), names=names)
        out = apply_montage(r, montage)
        assert out.n_channels == len(montage.pairs) == 22
        assert out.channel_names[0] == 'FP1-F7'
        np.testing.assert_array_equal(out.samples[0], r.samples[0] - r.samples[1])

    def test_common_average_two_channels(self):
        r = _recording([[1.0] * 5, [3.0] * 5])
        out = apply_montage(r, MontageSpec(name='car', common_average=True))
        np.testing.assert_array_equal(out.samples, [[-1.0] * 5, [1.0] * 5])

    def test_common_average_single_channel(self):
        r = _recording([[2.0, 5.0, -1.0]])
        out = apply_montage(r, load_montage('common_average'))
        np.testing.assert_array_equal(out.samples, np.zeros((1, 3)))

    def test_unknown_channel(self):
        r = _recording(np.zeros((2, 4)), names=['A', 'B'])
        with pytest.raises(MontageError):
            apply_montage(r, MontageSpec(name='x', pairs=(('A', 'Q'),)))

    def test_unknown_montage_name(self):
        with pytest.raises(MontageError):
            load_montage('no_such_montage')

    def test_common_average_sentinel(self):
        from recording.montage import parse_montage
        spec = parse_montage({'name': 'car', 'pairs': COMMON_AVERAGE})
        assert spec.common_average


def _amplitude(x, fs, freq):
    spectrum = np.abs(np.fft.rfft(x)) * 2 / x.size
    freqs = np.fft.rfftfreq(x.size, 1 / fs)
    return spectrum[np.argmin(np.abs(freqs - freq))]


class TestBandpass:

    fs = 250.0
    t = np.arange(2500) / 250.0

    def test_passband_preserved(self):
        r = _recording(np.sin(2 * np.pi * 10 * self.t)[None], fs=self.fs)
        out = bandpass_filter(r)
        # FFT on the interior avoids edge transients
        inner = out.samples[0, 250:2250]
        assert abs(_amplitude(inner, self.fs, 10) - 1.0) < 0.05

    def test_dc_rejected(self):
        r = _recording(np.full((1, 2500), 3.0), fs=self.fs)
        out = bandpass_filter(r)
        assert np.max(np.abs(out.samples)) < 0.03

    def test_stopband_attenuated(self):
        r = _recording(np.sin(2 * np.pi * 100 * self.t)[None], fs=self.fs)
        out = bandpass_filter(r)
        assert _amplitude(out.samples[0, 250:2250], self.fs, 100) < 0.1

    def test_hi_above_nyquist(self):
        r = _recording(np.zeros((1, 100)), fs=80.0)
        with pytest.raises(ParameterError):
            bandpass_filter(r, lo=1.0, hi=45.0)

    def test_preprocess_keeps_length(self):
        rng = np.random.default_rng(2)
        r = _recording(rng.standard_normal((2, 1000)), fs=self.fs)
        out = preprocess_recording(r, montage='common_average')
        assert out.samples.shape == (2, 1000)


class TestSegmentation:

    def test_single_window_columns(self):
        samples = np.tile(np.arange(128.0), (2, 1))
        windows = list(segment_stream(_recording(samples), T=64, p=64, stride=128))
        assert len(windows) == 1
        segment, aux, center = windows[0]
        # 1-based columns 33..96
        np.testing.assert_array_equal(segment.X[0], np.arange(32.0, 96.0))
        np.testing.assert_array_equal(aux.Z[0], np.r_[np.arange(32.0), np.arange(96.0, 128.0)])
        assert center == 64

    def test_too_short(self):
        assert list(segment_stream(_recording(np.zeros((1, 127))), 64, 64, 1)) == []

    def test_centers(self):
        windows = segment_stream(_recording(np.zeros((1, 256))), 64, 64, 64)
        assert [center for _, _, center in windows] == [64, 128, 192]

    def test_odd_p(self):
        with pytest.raises(ParameterError):
            list(segment_stream(_recording(np.zeros((1, 256))), 64, 63, 1))

    def test_split_join_inverse(self):
        window = np.arange(24.0).reshape(2, 12)
        X, Z = split_window(window, 8, 4)
        np.testing.assert_array_equal(join_window(X, Z), window)


class TestStandardize:

    def test_zero_variance(self):
        np.testing.assert_array_equal(standardize_segment([[1.0, 1.0], [3.0, 3.0]]), np.zeros((2, 2)))

    def test_single_row(self):
        np.testing.assert_allclose(standardize_segment([[0.0, 2.0]]), [[-1.0, 1.0]])

    def test_two_rows(self):
        out = standardize_segment([[0.0, 2.0], [0.0, 4.0]])
        np.testing.assert_allclose(out, [[-0.6324555, 0.6324555], [-1.2649111, 1.2649111]], atol=1e-6)

    def test_properties(self):
        rng = np.random.default_rng(5)
        out = standardize_segment(rng.standard_normal((4, 30)) * 7 + 3)
        np.testing.assert_allclose(out.mean(axis=1), 0.0, atol=1e-9)
        assert abs(out.std() - 1.0) < 1e-9

    def test_stack_matches_single(self):
        rng = np.random.default_rng(6)
        stack = rng.standard_normal((3, 2, 10))
        batched = standardize_segment(stack)
        for i in range(3):
            np.testing.assert_allclose(batched[i], standardize_segment(stack[i]), atol=1e-12)
