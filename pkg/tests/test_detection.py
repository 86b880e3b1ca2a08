"""Tests for scanning, gating, duplicate removal and annotation files."""

import json

import numpy as np
import pytest
import torch

from errors import FormatError, ParameterError, ValidationError
from detection import (
    Annotation,
    Candidate,
    annotate_recording,
    dedup,
    default_eps,
    gate,
    read_annotations_jsonl,
    scan,
    to_annotation,
    validate_record,
    write_annotations_jsonl,
)
from ndl import NdlHyper, build_model, predict_proba
from recording import Recording, split_window, standardize_segment
from simulation import SimConfig, build_truth, inject_motifs, sample_dataset, truth_rng
from training import TrainConfig, fit

SCAN_HYPER = NdlHyper(T=60, p=40, omega_widths=(4,), g_widths=(4,), kernel_size=3, stride=2)


def _constant_model(hyper, logit):
    model = build_model(hyper, seed=0)
    with torch.no_grad():
        for param in model.parameters():
            param.zero_()
        model.g_net.fc.bias.fill_(logit)
    return model


def _recording(d, n_times, seed=0):
    samples = np.random.default_rng(seed).standard_normal((d, n_times))
    return Recording(samples=samples, fs=100.0, channel_names=tuple(f"C{i}" for i in range(d)))


def _candidate(center, prob, importance=(1.0,)):
    return Candidate(center=center, prob=prob, importance=np.asarray(importance))


class TestScan:

    def test_window_count(self):
        candidates = scan(_recording(3, 1000), _constant_model(SCAN_HYPER, 20.0), threshold=0.5)
        centers = [c.center for c in candidates]
        assert len(centers) == 901
        assert centers[0] == 50 and centers[-1] == 950

    def test_threshold_near_one(self):
        candidates = scan(_recording(3, 300), _constant_model(SCAN_HYPER, 20.0), threshold=1 - 1e-12)
        assert candidates == []

    def test_saturated_logits_stay_below_one(self):
        candidates = scan(_recording(3, 200), _constant_model(SCAN_HYPER, 40.0), threshold=0.5)
        assert candidates
        assert all(0 < c.prob < 1 for c in candidates)

    def test_short_recording(self, small_model):
        assert scan(_recording(3, 20), small_model, threshold=0.5) == []

    @pytest.mark.parametrize('threshold', [0.0, 1.0, -0.1])
    def test_bad_threshold(self, small_model, threshold):
        with pytest.raises(ParameterError):
            scan(_recording(3, 100), small_model, threshold=threshold)

    def test_matches_per_window_evaluation(self, small_model, small_hyper):
        recording = _recording(3, 120, seed=1)
        width = small_hyper.T + small_hyper.p
        expected = {}
        for center in range(width // 2, recording.n_times - width // 2 + 1):
            window = standardize_segment(recording.samples[:, center - width // 2:center + width // 2])
            X, Z = split_window(window, small_hyper.T, small_hyper.p)
            expected[center] = predict_proba(X, Z, small_model)
        ordered = np.sort(list(expected.values()))
        threshold = float(ordered[ordered.size // 2] + ordered[ordered.size // 2 + 1]) / 2
        candidates = scan(recording, small_model, threshold)
        assert [c.center for c in candidates] == sorted(c for c, prob in expected.items() if prob > threshold)
        for c in candidates:
            assert c.prob == pytest.approx(expected[c.center], abs=1e-12)
            assert c.importance.sum() == pytest.approx(small_hyper.p)

    def test_stride_is_subset(self, small_model):
        recording = _recording(3, 200, seed=2)
        dense = {c.center: c.prob for c in scan(recording, small_model, threshold=1e-6)}
        sparse = scan(recording, small_model, threshold=1e-6, stride=5)
        first = min(dense)
        assert sparse
        for c in sparse:
            assert (c.center - first) % 5 == 0
            assert c.prob == pytest.approx(dense[c.center], abs=1e-12)


class TestGate:

    def test_single_dominant_channel(self):
        assert gate(_candidate(0, 0.9, [0.4, 0.2, 0.2, 0.2]), p=1) == [0]

    def test_uniform_weights(self):
        assert gate(_candidate(0, 0.9, [0.25, 0.25, 0.25, 0.25]), p=1) == []

    def test_two_channels(self):
        assert gate(_candidate(0, 0.9, [1.6, 0.4]), p=2) == [0]

    def test_order_and_ties(self):
        assert gate(_candidate(0, 0.9, [0.0, 0.45, 0.0, 0.55]), p=1) == [3, 1]
        assert gate(_candidate(0, 0.9, [0.5, 0.0, 0.5, 0.0]), p=1) == [0, 2]

    def test_to_annotation(self):
        candidate = _candidate(250, 0.8, [0.1, 0.7, 0.2])
        annotation = to_annotation(candidate, fs=100.0, channel_names=('a', 'b', 'c'), p=1)
        assert annotation.center_seconds == 2.5
        assert annotation.top_channels == (('b', 0.7),)
        assert to_annotation(_candidate(0, 0.8, [1 / 3] * 3), 100.0, ('a', 'b', 'c'), p=1) is None


class TestDedup:

    def test_clusters_keep_best(self):
        items = [_candidate(c, p) for c, p in [(100, 0.6), (105, 0.9), (110, 0.7), (400, 0.8)]]
        assert [c.center for c in dedup(items, eps=20)] == [105, 400]

    def test_chain_forms_one_cluster(self):
        items = [_candidate(c, 0.5 + c / 100) for c in (0, 10, 20, 30)]
        assert [c.center for c in dedup(items, eps=10)] == [30]

    def test_ties_go_to_earliest(self):
        items = [_candidate(c, 0.7) for c in (30, 10, 20)]
        assert [c.center for c in dedup(items, eps=15)] == [10]

    def test_single_and_empty(self):
        assert [c.center for c in dedup([_candidate(7, 0.9)], eps=5)] == [7]
        assert dedup([], eps=5) == []

    def test_noise_dropped(self):
        items = [_candidate(c, 0.9) for c in (0, 5, 500)]
        assert [c.center for c in dedup(items, eps=10, min_pts=2)] == [0]

    def test_idempotent(self):
        rng = np.random.default_rng(3)
        items = [_candidate(c, p) for c, p in zip(rng.integers(0, 2000, 60), rng.random(60))]
        once = dedup(items, eps=40)
        twice = dedup(once, eps=40)
        assert [(c.center, c.prob) for c in once] == [(c.center, c.prob) for c in twice]
        assert np.all(np.diff([c.center for c in once]) > 40)

    def test_min_pts_not_idempotent(self):
        items = [_candidate(c, 0.5 + (c % 7) / 20) for c in (0, 4, 8, 200, 203, 206, 900)]
        once = dedup(items, eps=10, min_pts=3)
        assert [c.center for c in once] == [4, 200]
        assert [c.center for c in dedup(once, eps=10)] == [4, 200]
        assert dedup(once, eps=10, min_pts=3) == []

    @pytest.mark.parametrize('eps,min_pts', [(0, 1), (-1, 1), (5, 0)])
    def test_bad_parameters(self, eps, min_pts):
        with pytest.raises(ParameterError):
            dedup([_candidate(0, 0.9)], eps=eps, min_pts=min_pts)


class TestAnnotate:

    def test_default_eps(self):
        assert default_eps(64, 64) == 64.0

    def test_uniform_weights_give_nothing(self):
        model = _constant_model(SCAN_HYPER, 20.0)
        assert annotate_recording(_recording(3, 400), model, threshold=0.5) == []

    def test_annotations_are_separated(self, small_model, small_hyper):
        recording = _recording(3, 600, seed=4)
        eps = default_eps(small_hyper.T, small_hyper.p)
        annotations = annotate_recording(recording, small_model, threshold=1e-6, gate_factor=1.0)
        assert annotations
        centers = [a.center for a in annotations]
        assert np.all(np.diff(centers) > eps)
        assert dedup(annotations, eps) == annotations
        for a in annotations:
            values = [value for _, value in a.top_channels]
            assert values == sorted(values, reverse=True)


class TestAnnotationFile:

    def _annotations(self):
        return [
            Annotation(center=100, center_seconds=1.0, prob=0.9, top_channels=(('Fp1', 0.6), ('F3', 0.5))),
            Annotation(center=300, center_seconds=3.0, prob=0.98, top_channels=(('O2', 0.7),)),
        ]

    def test_round_trip(self, tmp_path):
        path = tmp_path / 'out.jsonl'
        write_annotations_jsonl(path, self._annotations(), threshold=0.5, stride=8)
        header, records = read_annotations_jsonl(path)
        assert header['format'] == 'ndl-annotations' and header['stride'] == 8
        assert [r['center_sample'] for r in records] == [100, 300]
        assert records[0]['top_channels'][1] == {'name': 'F3', 'importance': 0.5}

    def test_empty_file_has_header(self, tmp_path):
        path = tmp_path / 'out.jsonl'
        write_annotations_jsonl(path, [])
        assert read_annotations_jsonl(path)[1] == []

    def test_missing_header(self, tmp_path):
        path = tmp_path / 'out.jsonl'
        path.write_text(json.dumps(self._annotations()[0].to_record()) + '\n')
        with pytest.raises(FormatError):
            read_annotations_jsonl(path)

    def test_decreasing_centers(self, tmp_path):
        path = tmp_path / 'out.jsonl'
        write_annotations_jsonl(path, self._annotations()[::-1])
        with pytest.raises(ValidationError):
            read_annotations_jsonl(path)

    @pytest.mark.parametrize('change', [
        {'prob': 1.5},
        {'prob': 1.0},
        {'prob': 0.0},
        {'center_sample': -1},
        {'top_channels': []},
        {'top_channels': [{'name': 'a', 'importance': 0.1}, {'name': 'b', 'importance': 0.2}]},
        {'extra': 1},
    ])
    def test_invalid_records(self, change):
        record = self._annotations()[0].to_record()
        record.update(change)
        with pytest.raises(ValidationError):
            validate_record(record)


def _recall(annotations, centers, tolerance):
    found = np.array([a.center for a in annotations])
    if found.size == 0:
        return 0.0
    distance = np.abs(np.asarray(centers)[:, None] - found[None, :]).min(axis=1)
    return float(np.mean(distance <= tolerance))


class TestMotifRecall:
    """Annotating continuous recordings with focal motifs at known centers."""

    def test_every_annotation_near_a_motif(self):
        config = SimConfig(d=4, T=8, p=16, n=8, seed=2)
        truth = build_truth(config, truth_rng(2))
        sim = inject_motifs(config, truth, length=3000, count=6, min_g=0.9, gate_factor=1.2)
        hyper = NdlHyper(T=8, p=16, omega_widths=(4,), g_widths=(4,), kernel_size=3, stride=2)
        model = build_model(hyper, seed=4)
        tolerance = default_eps(hyper.T, hyper.p)

        annotations = annotate_recording(sim.recording, model, threshold=1e-3, stride=2,
                                         gate_factor=1.05)
        assert _recall(annotations, sim.centers, tolerance) == 1.0
        assert len(annotations) == 6
        assert np.all(np.diff([a.center for a in annotations]) > tolerance)
        for a in annotations:
            assert np.min(np.abs(sim.centers - a.center)) < hyper.T

    def test_background_alone_gives_nothing(self, small_model):
        shared = np.random.default_rng(5).standard_normal(800)
        recording = Recording(samples=np.tile(shared, (3, 1)), fs=100.0,
                              channel_names=('a', 'b', 'c'))
        assert scan(recording, small_model, threshold=1e-6)
        assert annotate_recording(recording, small_model, threshold=1e-6, gate_factor=1.01) == []

    @pytest.mark.slow
    def test_trained_detector_recovers_injected_motifs(self):
        config = SimConfig(d=22, T=64, p=64, n=2048, seed=0)
        truth = build_truth(config, truth_rng(0))
        model, _ = fit(sample_dataset(config, truth).dataset,
                       TrainConfig(epochs=15, batch_size=64, learning_rate=1e-3, seed=0),
                       hyper=NdlHyper(T=64, p=64))
        sim = inject_motifs(config, truth, length=60_000, count=20, min_g=0.95)
        tolerance = default_eps(config.T, config.p)

        annotations = annotate_recording(sim.recording, model, threshold=0.5, stride=8)
        assert _recall(annotations, sim.centers, tolerance) >= 0.8
        assert np.all(np.diff([a.center for a in annotations]) > tolerance)
        assert dedup(annotations, tolerance) == annotations
