"""End-to-end tests of the command-line entry point on a tiny configuration."""

import csv

import numpy as np
import pytest
import yaml

from detection import read_annotations_jsonl
from main import main
from metrics import read_metrics_csv
from recording import read_recording

SMALL_CONFIG = {
    'simulation': {'d': 3, 'T': 8, 'p': 16, 'n': 40, 'seed': 0, 'n_test': 40,
                   'continuous_length': 600, 'motifs': 2, 'motif_min_g': 0.9},
    'sweep': {'n_values': [20, 40], 'seeds': [0]},
    'model': {'omega_widths': [4], 'g_widths': [4], 'kernel_size': 3, 'stride': 2},
    'training': {'epochs': 2, 'batch_size': 16, 'learning_rate': 0.01, 'checkpoint_every': 0},
    'detector': {'threshold': 0.5, 'stride': 4, 'gate_factor': 1.05},
    'rank': {'top': 2},
    'logging': {'level': 'WARNING'},
}


@pytest.fixture
def run(tmp_path, monkeypatch):
    """Invoke main() with a small config whose out_dir is tmp_path."""
    monkeypatch.delenv('NDL_SEED', raising=False)
    config = dict(SMALL_CONFIG, paths={'out_dir': str(tmp_path)})
    config_path = tmp_path / 'config.yaml'
    config_path.write_text(yaml.safe_dump(config))

    def _run(*argv):
        return main(['--config', str(config_path), *argv])
    return _run


@pytest.fixture
def trained(run, tmp_path):
    """Simulated train/test sets and a model trained on the first."""
    assert run('simulate', '--out', str(tmp_path / 'train.ndls')) == 0
    assert run('simulate', '--test', '--out', str(tmp_path / 'test.ndls')) == 0
    assert run('train', '--data', str(tmp_path / 'train.ndls'), '--out', str(tmp_path / 'model')) == 0
    return tmp_path


def _rows(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))


class TestSimulate:

    def test_byte_identical_reruns(self, run, tmp_path):
        assert run('simulate', '--out', str(tmp_path / 'a.ndls')) == 0
        assert run('simulate', '--out', str(tmp_path / 'b.ndls')) == 0
        assert (tmp_path / 'a.ndls').read_bytes() == (tmp_path / 'b.ndls').read_bytes()
        assert (tmp_path / 'a.ndls.truth.yaml').read_bytes() == (tmp_path / 'b.ndls.truth.yaml').read_bytes()

    def test_seed_from_environment(self, run, tmp_path, monkeypatch):
        assert run('simulate', '--seed', '5', '--out', str(tmp_path / 'flag.ndls')) == 0
        monkeypatch.setenv('NDL_SEED', '5')
        assert run('simulate', '--out', str(tmp_path / 'env.ndls')) == 0
        assert (tmp_path / 'flag.ndls').read_bytes() == (tmp_path / 'env.ndls').read_bytes()

    def test_test_stream_differs(self, run, tmp_path):
        assert run('simulate', '--out', str(tmp_path / 'a.ndls')) == 0
        assert run('simulate', '--test', '--out', str(tmp_path / 'b.ndls')) == 0
        assert (tmp_path / 'a.ndls').read_bytes() != (tmp_path / 'b.ndls').read_bytes()

    def test_zero_samples_fails_cleanly(self, run, tmp_path, capsys):
        assert run('simulate', '--n', '0', '--out', str(tmp_path / 'sim.ndls')) == 1
        assert capsys.readouterr().err.startswith('error:')
        assert not (tmp_path / 'sim.ndls').exists()

    def test_continuous(self, run, tmp_path):
        out = tmp_path / 'cont.ndlr'
        assert run('simulate', '--continuous', '--out', str(out)) == 0
        motifs = yaml.safe_load((tmp_path / 'cont.ndlr.motifs.yaml').read_text())
        assert len(motifs['centers']) == 2
        assert all(g >= 0.9 for g in motifs['g_star'])
        assert set(motifs['channels']) <= {'ch000', 'ch001', 'ch002'}


class TestTrainAndEval:

    def test_history_has_one_row_per_epoch(self, run, trained):
        history = _rows(trained / 'model.history.csv')
        assert [row['epoch'] for row in history] == ['1', '2']
        assert (trained / 'model.yaml').exists() and (trained / 'model.tensors').exists()

    def test_missing_dataset(self, run, tmp_path, capsys):
        assert run('train', '--data', str(tmp_path / 'absent.ndls')) == 1
        assert 'absent.ndls' in capsys.readouterr().err

    def test_eval_with_truth(self, run, trained):
        assert run('eval', '--model', str(trained / 'model'), '--data', str(trained / 'test.ndls'),
                   '--out', str(trained / 'metrics.csv')) == 0
        (row,) = read_metrics_csv(trained / 'metrics.csv')
        assert row['dataset'] == 'test.ndls'
        assert row['mae_alpha'] is not None and row['mae_alpha'] >= 0
        assert 0 <= row['mae_g'] <= 1
        scores = _rows(trained / 'metrics.scores.csv')
        assert len(scores) == 40 and scores[0]['g_star'] != 'NA'

    def test_eval_without_truth(self, run, trained):
        (trained / 'test.ndls.truth.yaml').unlink()
        assert run('eval', '--model', str(trained / 'model'), '--data', str(trained / 'test.ndls'),
                   '--out', str(trained / 'metrics.csv')) == 0
        (row,) = read_metrics_csv(trained / 'metrics.csv')
        assert row['mae_alpha'] is None and row['mae_g'] is None
        assert row['sens'] is not None

    def test_rank_frequencies(self, run, trained, capsys):
        assert run('rank', '--model', str(trained / 'model'), '--data', str(trained / 'test.ndls'),
                   '--out', str(trained / 'ranking.csv')) == 0
        assert 'Top-1 hit rate' in capsys.readouterr().out
        frequency = _rows(trained / 'ranking.frequency.csv')
        assert len(frequency) == 3
        assert sum(float(row['frequency']) for row in frequency) == pytest.approx(2.0)
        assert all(float(row['random_baseline']) == pytest.approx(2 / 3) for row in frequency)
        ranking = _rows(trained / 'ranking.csv')
        assert len(ranking) == 40
        assert all(float(r['importance_1']) >= float(r['importance_2']) for r in ranking)

    def test_rank_regions(self, run, trained):
        regions = trained / 'regions.yaml'
        regions.write_text(yaml.safe_dump({'ch000': 'left', 'ch001': 'left', 'ch002': 'right'}))
        assert run('rank', '--model', str(trained / 'model'), '--data', str(trained / 'test.ndls'),
                   '--regions', str(regions), '--out', str(trained / 'ranking.csv')) == 0
        shares = _rows(trained / 'ranking.frequency.regions.csv')
        assert [row['region'] for row in shares] == ['left', 'right']
        assert sum(float(row['share']) for row in shares) == pytest.approx(1.0)

    def test_rank_top_out_of_range(self, run, trained):
        assert run('rank', '--model', str(trained / 'model'), '--data', str(trained / 'test.ndls'),
                   '--top', '4') == 1

    def test_report(self, run, trained):
        assert run('eval', '--model', str(trained / 'model'), '--data', str(trained / 'test.ndls'),
                   '--out', str(trained / 'metrics.csv')) == 0
        assert run('report', '--history', str(trained / 'model.history.csv'),
                   '--scores', str(trained / 'metrics.scores.csv'),
                   '--out-dir', str(trained / 'report')) == 0
        roc = _rows(trained / 'report' / 'roc_points.csv')
        fpr = np.array([float(row['fpr']) for row in roc])
        tpr = np.array([float(row['tpr']) for row in roc])
        assert np.all(np.diff(fpr) >= 0) and np.all(np.diff(tpr) >= 0)
        assert (fpr[-1], tpr[-1]) == (1.0, 1.0)
        assert len(_rows(trained / 'report' / 'loss_curve.csv')) == 2

    def test_report_needs_input(self, run):
        assert run('report') == 1


class TestDetect:

    def test_annotates_simulated_recording(self, run, trained):
        assert run('simulate', '--continuous', '--out', str(trained / 'cont.ndlr')) == 0
        motifs = yaml.safe_load((trained / 'cont.ndlr.motifs.yaml').read_text())
        out = trained / 'annotations.jsonl'
        assert run('detect', '--recording', str(trained / 'cont.ndlr'), '--threshold', '0.01',
                   '--model', str(trained / 'model'), '--out', str(out)) == 0
        header, records = read_annotations_jsonl(out)
        assert header['stride'] == 4 and header['eps'] == 12.0
        assert records
        centers = np.array([r['center_sample'] for r in records])
        assert np.all(np.diff(centers) > 12)
        distance = np.abs(centers[:, None] - np.array(motifs['centers'])[None, :]).min(axis=1)
        assert np.all(distance <= 12)

    def test_malformed_recording(self, run, trained, capsys):
        bad = trained / 'bad.ndlr'
        bad.write_bytes(b'not a recording')
        assert run('detect', '--recording', str(bad), '--model', str(trained / 'model'),
                   '--out', str(trained / 'a.jsonl')) == 1
        assert capsys.readouterr().err.startswith('error:')


class TestParser:

    def test_help_lists_config_keys(self, run, capsys):
        with pytest.raises(SystemExit) as exit_info:
            run('detect', '--help')
        assert exit_info.value.code == 0
        text = capsys.readouterr().out
        assert 'config keys:' in text
        assert 'detector.eps' in text and 'preprocessing.montage' in text

    def test_unknown_flag(self, run):
        with pytest.raises(SystemExit) as exit_info:
            run('simulate', '--bogus')
        assert exit_info.value.code == 2

    @pytest.mark.parametrize('command, keys', [
        ('detect', ['paths.out_dir', 'preprocessing.filter_order']),
        ('sweep', ['paths.out_dir', 'simulation.base_source', 'simulation.fs', 'model.stride']),
        ('simulate', ['simulation.motif_gain', 'detector.gate_factor']),
    ])
    def test_help_lists_honored_keys(self, run, capsys, command, keys):
        with pytest.raises(SystemExit):
            run(command, '--help')
        text = capsys.readouterr().out
        assert all(key in text for key in keys)
        assert 'logging.format' in text

    def test_global_out_dir(self, run, tmp_path):
        assert run('--out-dir', str(tmp_path / 'elsewhere'), 'simulate') == 0
        assert (tmp_path / 'elsewhere' / 'sim.ndls').exists()

    def test_model_flags(self, run, tmp_path):
        assert run('simulate', '--out', str(tmp_path / 'train.ndls')) == 0
        assert run('train', '--data', str(tmp_path / 'train.ndls'), '--out', str(tmp_path / 'model'),
                   '--epochs', '1', '--omega-widths', '3,5', '--g-widths', '2',
                   '--kernel-size', '5', '--conv-stride', '1') == 0
        hyper = yaml.safe_load((tmp_path / 'model.yaml').read_text())['hyper']
        assert hyper['omega_widths'] == [3, 5] and hyper['g_widths'] == [2]
        assert hyper['kernel_size'] == 5 and hyper['stride'] == 1

    def test_simulation_flags(self, run, tmp_path):
        assert run('simulate', '--continuous', '--fs', '128', '--ar-coeffs', '0.5,-0.2',
                   '--motif-min-g', '0.8', '--out', str(tmp_path / 'cont.ndlr')) == 0
        assert read_recording(str(tmp_path / 'cont.ndlr')).fs == 128.0
        motifs = yaml.safe_load((tmp_path / 'cont.ndlr.motifs.yaml').read_text())
        assert all(g >= 0.8 for g in motifs['g_star'])

    def test_log_format_flag(self, run, tmp_path, capsys):
        assert run('--log-level', 'INFO', '--log-format', 'LOG>%(message)s',
                   'simulate', '--out', str(tmp_path / 'sim.ndls')) == 0
        assert 'LOG>' in capsys.readouterr().err

    def test_unknown_config_key(self, tmp_path, capsys):
        config_path = tmp_path / 'config.yaml'
        config_path.write_text(yaml.safe_dump({'training': {'epoch': 3}}))
        assert main(['--config', str(config_path), 'report']) == 1
        assert 'training.epoch' in capsys.readouterr().err


@pytest.mark.slow
class TestSweep:

    def test_sweep_and_report(self, run, tmp_path):
        assert run('sweep', '--out', str(tmp_path / 'conv.csv')) == 0
        rows = _rows(tmp_path / 'conv.csv')
        assert [int(row['n']) for row in rows] == [20, 40]
        assert run('report', '--sweep', str(tmp_path / 'conv.csv'), '--out-dir', str(tmp_path)) == 0
        assert len(_rows(tmp_path / 'mae_vs_n.csv')) == 2
