"""Tests for the training loop, checkpoints, history files and data splits."""

import os

import numpy as np
import pytest
import torch

from conftest import SMALL_HYPER, separable_dataset
from errors import ParameterError, ValidationError
from ndl import build_model, nll_loss, save_model
from ndl.serialization import model_paths
from training import (
    EpochRecord,
    TrainConfig,
    TrainHistory,
    evaluate,
    fit,
    load_checkpoint,
    train_val_split,
)


def _params_equal(a, b):
    sa, sb = a.state_dict(), b.state_dict()
    return sa.keys() == sb.keys() and all(torch.equal(sa[k], sb[k]) for k in sa)


class TestSplit:

    def test_partition(self):
        train, val = train_val_split(100, 0.2, seed=4)
        assert val.size == 20 and train.size == 80
        assert np.array_equal(np.sort(np.r_[train, val]), np.arange(100))
        assert np.all(np.diff(train) > 0) and np.all(np.diff(val) > 0)

    def test_deterministic(self):
        a = train_val_split(50, 0.3, seed=9)
        b = train_val_split(50, 0.3, seed=9)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))

    def test_both_sides_nonempty(self):
        train, val = train_val_split(2, 0.01, seed=0)
        assert train.size == 1 and val.size == 1
        train, val = train_val_split(3, 0.99, seed=0)
        assert train.size == 1 and val.size == 2

    def test_too_small(self):
        with pytest.raises(ValidationError):
            train_val_split(1, 0.2, seed=0)


class TestTrainConfig:

    def test_defaults(self):
        config = TrainConfig()
        assert (config.epochs, config.batch_size, config.learning_rate) == (100, 64, 1e-3)

    def test_from_dict_round_trip(self):
        config = TrainConfig(epochs=3, batch_size=8, learning_rate=0.01, seed=2)
        assert TrainConfig.from_dict(config.to_dict()) == config

    @pytest.mark.parametrize('kwargs', [
        {'epochs': 0}, {'batch_size': 0}, {'val_fraction': 1.0},
        {'learning_rate': -1.0}, {'learning_rate': float('nan')},
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(ParameterError):
            TrainConfig(**kwargs)


class TestHistory:

    def test_csv_round_trip(self, tmp_path):
        history = TrainHistory([
            EpochRecord(epoch=1, train_loss=0.7, val_loss=0.69, sens=0.5, prec=0.25,
                        f1=1 / 3, prauc=0.4, auc=None),
            EpochRecord(epoch=2, train_loss=0.6, val_loss=0.65, sens=1.0, prec=0.5,
                        f1=2 / 3, prauc=0.5, auc=0.75),
        ])
        path = tmp_path / 'history.csv'
        history.to_csv(path)
        assert path.read_text().splitlines()[0] == 'epoch,train_loss,val_loss,sens,prec,f1,prauc,auc'
        assert TrainHistory.from_csv(path) == history


class TestFit:

    def test_deterministic(self):
        data = separable_dataset(n=80)
        config = TrainConfig(epochs=3, batch_size=16, learning_rate=1e-2, seed=5)
        model_a, history_a = fit(data, config, hyper=SMALL_HYPER)
        model_b, history_b = fit(data, config, hyper=SMALL_HYPER)
        assert history_a == history_b
        assert _params_equal(model_a, model_b)

    def test_zero_learning_rate_keeps_parameters(self):
        data = separable_dataset(n=60)
        config = TrainConfig(epochs=2, batch_size=16, learning_rate=0.0, seed=5)
        model, history = fit(data, config, hyper=SMALL_HYPER)
        assert _params_equal(model, build_model(SMALL_HYPER, seed=5))
        assert history[0].val_loss == history[1].val_loss

    def test_init_model_is_not_modified(self, small_model):
        data = separable_dataset(n=60)
        before = {k: v.clone() for k, v in small_model.state_dict().items()}
        fit(data, TrainConfig(epochs=1, batch_size=16, learning_rate=1e-2), init=small_model)
        assert all(torch.equal(before[k], v) for k, v in small_model.state_dict().items())

    def test_loss_decreases_on_separable_data(self):
        data = separable_dataset(n=200)
        config = TrainConfig(epochs=20, batch_size=32, learning_rate=1e-2, seed=0)
        model, history = fit(data, config, hyper=SMALL_HYPER)
        assert len(history) == 20
        assert history[-1].train_loss < history[0].train_loss
        assert evaluate(model, data).metrics.auc > 0.8

    def test_overfits_small_batch(self):
        data = separable_dataset(n=8, seed=3)
        model = build_model(SMALL_HYPER, seed=0)
        optimizer = torch.optim.Adam(model.parameters(), lr=1e-2)
        batch = (data.X, data.Z, data.Y)
        losses = []
        for _ in range(500):
            optimizer.zero_grad()
            loss = nll_loss(batch, model)
            loss.backward()
            optimizer.step()
            losses.append(loss.item())
            if losses[-1] < 0.05:
                break
        assert losses[-1] < 0.05

    def test_best_model_matches_recorded_loss(self):
        data = separable_dataset(n=100)
        config = TrainConfig(epochs=4, batch_size=16, learning_rate=1e-2, seed=1)
        model, history = fit(data, config, hyper=SMALL_HYPER)
        _, val_idx = train_val_split(len(data), config.val_fraction, config.seed)
        best_loss = evaluate(model, data.subset(val_idx)).loss
        initial = evaluate(build_model(SMALL_HYPER, seed=1), data.subset(val_idx)).loss
        assert best_loss == pytest.approx(min(initial, *history.column('val_loss')), rel=1e-9)

    def test_single_class_training_split(self):
        data = separable_dataset(n=40)
        data = type(data)(X=data.X, Z=data.Z, Y=np.zeros(40, dtype=int))
        with pytest.raises(ValidationError):
            fit(data, TrainConfig(epochs=1), hyper=SMALL_HYPER)


class TestCheckpoints:

    def test_resume_continues_epochs(self, tmp_path):
        data = separable_dataset(n=80)
        config = TrainConfig(epochs=2, batch_size=16, learning_rate=1e-2, seed=2, checkpoint_every=1)
        _, full = fit(data, config, hyper=SMALL_HYPER, checkpoint_dir=str(tmp_path))
        for epoch in (1, 2):
            sidecar, blob = model_paths(str(tmp_path / f'checkpoint-{epoch:04d}'))
            assert os.path.exists(sidecar) and os.path.exists(blob)

        resumed_config = TrainConfig(epochs=1, batch_size=16, learning_rate=1e-2, seed=2,
                                     checkpoint_every=0)
        _, resumed = fit(data, resumed_config, resume=str(tmp_path / 'checkpoint-0001'))
        assert resumed.column('epoch') == [1, 2]
        assert resumed[1].train_loss == pytest.approx(full[1].train_loss, rel=1e-5)
        assert resumed[1].val_loss == pytest.approx(full[1].val_loss, rel=1e-5)

    def test_checkpoint_contents(self, tmp_path):
        data = separable_dataset(n=60)
        config = TrainConfig(epochs=1, batch_size=16, learning_rate=1e-2, seed=2, checkpoint_every=1)
        fit(data, config, hyper=SMALL_HYPER, checkpoint_dir=str(tmp_path))
        model, optimizer, best_state, best_loss, epoch, history = \
            load_checkpoint(str(tmp_path / 'checkpoint-0001'), 1e-2)
        assert epoch == 1 and len(history) == 1
        assert best_state.keys() == model.state_dict().keys()
        assert np.isfinite(best_loss)
        assert len(optimizer.state) == len(list(model.parameters()))

    def test_model_file_is_not_a_checkpoint(self, tmp_path, small_model):
        path = str(tmp_path / 'model')
        save_model(small_model, path)
        with pytest.raises(ValidationError):
            load_checkpoint(path, 1e-3)


class TestEvaluate:

    def test_scores(self, small_model):
        data = separable_dataset(n=40)
        result = evaluate(small_model, data, with_alpha=True)
        assert result.probs.shape == (40,) and np.all((result.probs > 0) & (result.probs < 1))
        assert result.alpha.shape == (40, 3, 8)
        np.testing.assert_allclose(result.alpha.sum(axis=1), 1.0, atol=1e-12)
        expected = np.mean(np.logaddexp(0, result.logits) - data.Y * result.logits)
        assert result.loss == pytest.approx(expected)
        assert result.loss > 0

    def test_empty(self, small_model):
        data = separable_dataset(n=4)
        with pytest.raises(ParameterError):
            evaluate(small_model, data.subset(np.array([], dtype=int)))


class TestResourceMonitor:

    def test_usage_fields(self):
        from training import ResourceMonitor
        monitor = ResourceMonitor()
        usage = monitor.get_usage()
        assert set(usage) == {'cpu_percent', 'rss_mb', 'system_memory_percent'}
        assert usage['rss_mb'] > 0
        assert monitor.format_usage().startswith('cpu ')
