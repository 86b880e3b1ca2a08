"""
Main entry point for the nested-model spike detector.

This application:
- Simulates spike datasets with known channel weights and probabilities
- Trains the channel-weighted classifier and evaluates it
- Ranks channels by learned importance
- Annotates continuous recordings with a sliding-window detector
- Runs the sample-size convergence study and writes plot-ready data

Usage:
    python src/main.py [--config config.yaml] <command> [options]

Commands: simulate, train, eval, detect, rank, report, sweep

Dependencies:
- config.settings for configuration management
- recording for NDLR files and preprocessing
- simulation for synthetic data
- ndl for the model
- training for fit and evaluate
- metrics for reports
- detection for annotation

Architecture:
- Every command reads config.yaml, applies its flags as overrides and
  validates paths before doing any work
- Library errors are reported as a one-line diagnostic with exit code 1
"""

import argparse
import csv
import logging
import os
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import yaml

from config.settings import SEED_ENV_VAR, Config
from errors import ConfigError, NdlError, ParameterError
from ndl import NdlHyper, channel_importance, load_model, save_model, top_channels
from ndl.serialization import model_paths
from training import TrainConfig, TrainHistory, evaluate, fit
from metrics import (
    format_table,
    pr_curve,
    read_metrics_csv,
    roc_curve,
    top1_hit_rate,
    write_metrics_csv,
)
from metrics.report import format_value, parse_value
from recording import preprocess_from_config, read_recording, write_recording
from simulation import (
    TEST_STREAM,
    TRAIN_STREAM,
    SimConfig,
    build_truth,
    inject_motifs,
    load_simulation,
    sample_dataset,
    save_simulation,
    truth_rng,
)
from simulation.experiment import (
    mae_table,
    read_convergence_csv,
    recovery_errors,
    run_convergence,
    write_convergence_csv,
)
from detection import annotate_recording, default_eps, write_annotations_jsonl

logger = logging.getLogger('ndl')

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                                   'config.yaml')

# Config keys honored by each command, listed in --help
COMMAND_KEYS = {
    'simulate': ['simulation.d', 'simulation.T', 'simulation.p', 'simulation.n', 'simulation.seed',
                 'simulation.base_source', 'simulation.ar_coeffs', 'simulation.fs',
                 'simulation.continuous_length', 'simulation.motifs', 'simulation.motif_min_g',
                 'simulation.motif_gain', 'detector.gate_factor', 'paths.out_dir'],
    'train': ['model.omega_widths', 'model.g_widths', 'model.kernel_size', 'model.stride',
              'training.epochs', 'training.batch_size', 'training.learning_rate', 'training.seed',
              'training.val_fraction', 'training.checkpoint_every', 'paths.out_dir'],
    'eval': ['detector.threshold', 'paths.out_dir'],
    'detect': ['detector.threshold', 'detector.stride', 'detector.eps', 'detector.min_pts',
               'detector.gate_factor', 'detector.standardize', 'preprocessing.lo',
               'preprocessing.hi', 'preprocessing.filter_order', 'preprocessing.montage',
               'paths.out_dir'],
    'rank': ['rank.top', 'detector.gate_factor', 'paths.out_dir'],
    'report': ['paths.out_dir'],
    'sweep': ['simulation.d', 'simulation.T', 'simulation.p', 'simulation.seed',
              'simulation.base_source', 'simulation.ar_coeffs', 'simulation.fs', 'simulation.n_test',
              'sweep.n_values', 'sweep.seeds',
              'model.omega_widths', 'model.g_widths', 'model.kernel_size', 'model.stride',
              'training.epochs', 'training.batch_size', 'training.learning_rate',
              'training.val_fraction', 'paths.out_dir'],
}

SHARED_KEYS = ['logging.level', 'logging.format']


def _sidecar(path):
    return model_paths(path)[0] if path else None


def _int_list(text):
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


class NdlApp:
    """
    Command runner.
    Holds the merged configuration and dispatches to one cmd_* method per command.
    """

    def __init__(self, config):
        self.config = config

    def _out_path(self, path, default_name):
        return path if path else os.path.join(self.config.out_dir, default_name)

    def _sim_config(self, seed=None):
        section = self.config.section('simulation')
        if seed is not None:
            section['seed'] = seed
        return SimConfig.from_dict(section)

    def _hyper(self, T, p):
        model = self.config.section('model')
        return NdlHyper(T=T, p=p, omega_widths=model['omega_widths'], g_widths=model['g_widths'],
                        kernel_size=model['kernel_size'], stride=model['stride'])

    def _train_config(self, seed):
        section = self.config.section('training')
        section['seed'] = seed
        return TrainConfig.from_dict(section)

    # Commands
    def cmd_simulate(self, args):
        """Write a simulated dataset with its truth sidecar, or a continuous recording."""
        seed = self.config.resolve_seed('simulation', args.seed)
        sim_config = self._sim_config(seed)
        out = self._out_path(args.out, 'sim.ndlr' if args.continuous else 'sim.ndls')
        inputs = [] if sim_config.synthetic else [sim_config.base_source]
        self.config.validate_paths(inputs=inputs, outputs=[out])
        truth = build_truth(sim_config, truth_rng(seed))

        if args.continuous:
            length = int(self.config.get('simulation', 'continuous_length'))
            count = int(self.config.get('simulation', 'motifs'))
            result = inject_motifs(sim_config, truth, length, count, seed=seed,
                                   min_g=float(self.config.get('simulation', 'motif_min_g')),
                                   gain=float(self.config.get('simulation', 'motif_gain')),
                                   gate_factor=float(self.config.get('detector', 'gate_factor')))
            write_recording(result.recording, out)
            with open(out + '.motifs.yaml', 'w') as f:
                yaml.safe_dump({'seed': seed,
                                'centers': [int(c) for c in result.centers],
                                'g_star': [float(g) for g in result.g_star],
                                'channels': [result.recording.channel_names[c]
                                             for c in result.channels]}, f, sort_keys=False)
            print(f"Continuous recording: d={sim_config.d}, {length} samples, "
                  f"{count} motifs, seed={seed}")
            print(f"Wrote {out}")
            return 0

        sim = sample_dataset(sim_config, truth, stream=TEST_STREAM if args.test else TRAIN_STREAM)
        save_simulation(sim, out, config=sim_config.to_dict())
        positives = int(sim.dataset.Y.sum())
        print(f"Simulated n={len(sim)} d={sim_config.d} T={sim_config.T} p={sim_config.p} seed={seed}")
        print(f"Class balance: {positives} positive / {len(sim) - positives} negative")
        print(f"Wrote {out}")
        return 0

    def cmd_train(self, args):
        """Fit a model and write it with its history."""
        seed = self.config.resolve_seed('training', args.seed)
        out = self._out_path(args.out, 'model')
        history_path = args.history or out + '.history.csv'
        self.config.validate_paths(inputs=[args.data, _sidecar(args.init_model), _sidecar(args.resume)],
                                   outputs=[out, history_path])
        dataset, _ = load_simulation(args.data)
        train_config = self._train_config(seed)
        init = load_model(args.init_model) if args.init_model else None

        print(f"Training on {len(dataset)} segments (d={dataset.n_channels}), "
              f"{train_config.epochs} epochs, seed={seed}")
        model, history = fit(dataset, train_config, init=init,
                             hyper=self._hyper(dataset.T, dataset.p),
                             checkpoint_dir=args.checkpoint_dir, resume=args.resume)
        save_model(model, out, training_config=train_config.to_dict())
        history.to_csv(history_path)
        best = min(history, key=lambda record: record.val_loss)
        print(f"Best validation loss {best.val_loss:.5f} at epoch {best.epoch}")
        print(f"Wrote {out}.yaml, {out}.tensors and {history_path}")
        return 0

    def cmd_eval(self, args):
        """Score a dataset; MAE fields are filled only when truth is available."""
        out = self._out_path(args.out, 'metrics.csv')
        scores_path = args.scores or os.path.splitext(out)[0] + '.scores.csv'
        self.config.validate_paths(inputs=[args.data, _sidecar(args.model)],
                                   outputs=[out, scores_path])
        model = load_model(args.model)
        dataset, sim = load_simulation(args.data)
        threshold = float(self.config.get('detector', 'threshold'))

        result = evaluate(model, dataset, threshold=threshold, with_alpha=sim is not None)
        record = result.metrics
        if sim is not None:
            err_alpha, err_g = recovery_errors(sim, result)
            record = record.with_recovery(mae_alpha=err_alpha, mae_g=err_g)
        write_metrics_csv(out, [((os.path.basename(args.data),), record)], leading=('dataset',))
        with open(scores_path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['segment', 'label', 'prob', 'g_star'])
            for i, (label, prob) in enumerate(zip(dataset.Y, result.probs)):
                truth = format_value(sim.g_star[i]) if sim is not None else 'NA'
                writer.writerow([i, int(label), repr(float(prob)), truth])

        print(f"Evaluated {len(dataset)} segments at threshold {threshold}")
        print(format_table(record))
        print(f"Wrote {out} and {scores_path}")
        return 0

    def cmd_detect(self, args):
        """Annotate a continuous recording."""
        out = self._out_path(args.out, 'annotations.jsonl')
        self.config.validate_paths(inputs=[args.recording, _sidecar(args.model)], outputs=[out])
        recording = read_recording(args.recording)
        if args.preprocess:
            recording = preprocess_from_config(recording, self.config.section('preprocessing'))
        model = load_model(args.model)
        detector = self.config.section('detector')
        eps = detector['eps'] if detector['eps'] is not None else default_eps(model.hyper.T, model.hyper.p)

        annotations = annotate_recording(
            recording, model,
            threshold=float(detector['threshold']),
            stride=int(detector['stride']),
            eps=float(eps),
            min_pts=int(detector['min_pts']),
            gate_factor=float(detector['gate_factor']),
            standardize=bool(detector['standardize']),
        )
        write_annotations_jsonl(out, annotations,
                                recording=os.path.basename(args.recording),
                                threshold=float(detector['threshold']),
                                stride=int(detector['stride']), eps=float(eps))
        print(f"Scanned {recording.n_channels} channels x {recording.n_times} samples")
        print(f"{len(annotations)} annotations written to {out}")
        return 0

    def cmd_rank(self, args):
        """Top-L channels per segment and how often each channel is selected."""
        out = self._out_path(args.out, 'ranking.csv')
        freq_out = args.freq_out or os.path.splitext(out)[0] + '.frequency.csv'
        self.config.validate_paths(inputs=[args.data, _sidecar(args.model), args.regions],
                                   outputs=[out, freq_out])
        model = load_model(args.model)
        dataset, sim = load_simulation(args.data)
        L = int(self.config.rank_top)
        d = dataset.n_channels
        if not 1 <= L <= d:
            raise ParameterError(f"--top must be in 1..{d}, got {L}")

        result = evaluate(model, dataset, with_alpha=True)
        importance = channel_importance(result.alpha)
        counts = np.zeros(d)
        with open(out, 'w', newline='') as f:
            writer = csv.writer(f)
            header = ['segment', 'label', 'prob']
            for rank in range(1, L + 1):
                header += [f'channel_{rank}', f'importance_{rank}']
            writer.writerow(header)
            for i in range(len(dataset)):
                ranked = top_channels(importance[i], L)
                row = [i, int(dataset.Y[i]), repr(float(result.probs[i]))]
                for index, value in ranked:
                    counts[index] += 1
                    row += [dataset.channel_names[index], repr(value)]
                writer.writerow(row)

        frequency = counts / len(dataset)
        with open(freq_out, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['channel', 'frequency', 'random_baseline'])
            for name, value in zip(dataset.channel_names, frequency):
                writer.writerow([name, repr(float(value)), repr(L / d)])

        if args.regions:
            self._write_regions(args.regions, dataset.channel_names, counts, L,
                                os.path.splitext(freq_out)[0] + '.regions.csv')

        print(f"Ranked {len(dataset)} segments, top {L} of {d} channels")
        if sim is not None:
            self._print_hit_rates(importance, channel_importance(sim.alpha_star), dataset.p)
        print(f"Wrote {out} and {freq_out}")
        return 0

    def _print_hit_rates(self, importance, true_importance, p):
        """Top-1 agreement with the truth, overall and where the true weights clear the gate."""
        d = importance.shape[1]
        factor = float(self.config.get('detector', 'gate_factor'))
        concentrated = true_importance.max(axis=1) > factor * p / d
        print(f"Top-1 hit rate {top1_hit_rate(importance, true_importance):.4f} "
              f"(random baseline {1 / d:.4f})")
        if concentrated.any():
            rate = top1_hit_rate(importance, true_importance, mask=concentrated)
            print(f"Top-1 hit rate on {int(concentrated.sum())} concentrated segments {rate:.4f}")

    def _write_regions(self, regions_path, channel_names, counts, L, path):
        with open(regions_path, 'r') as f:
            regions = yaml.safe_load(f) or {}
        if not isinstance(regions, dict):
            raise ConfigError(f"{regions_path} must map channel names to regions")
        unknown = sorted(set(regions) - set(channel_names))
        if unknown:
            raise ConfigError(f"Region file names unknown channels: {unknown}")
        total = counts.sum()
        names = sorted({str(region) for region in regions.values()})
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['region', 'share', 'random_baseline'])
            for region in names:
                members = [i for i, name in enumerate(channel_names)
                           if str(regions.get(name)) == region]
                share = counts[members].sum() / total
                writer.writerow([region, repr(float(share)), repr(len(members) / len(channel_names))])
        logger.info("Region shares of %d top-%d selections written to %s", int(total), L, path)

    def cmd_report(self, args):
        """Turn history, scores, metrics and sweep CSVs into plot-ready point sets."""
        out_dir = args.out_dir or self.config.out_dir
        self.config.validate_paths(inputs=[args.history, args.scores, args.metrics, args.sweep],
                                   outputs=[os.path.join(out_dir, 'report')])
        written = []
        if args.history:
            history = TrainHistory.from_csv(args.history)
            path = os.path.join(out_dir, 'loss_curve.csv')
            with open(path, 'w', newline='') as f:
                writer = csv.writer(f)
                writer.writerow(['epoch', 'train_loss', 'val_loss'])
                for record in history:
                    writer.writerow([record.epoch, repr(record.train_loss), repr(record.val_loss)])
            written.append(path)
        if args.scores:
            labels, probs = self._read_scores(args.scores)
            fpr, tpr, thresholds = roc_curve(probs, labels)
            written.append(self._write_points(os.path.join(out_dir, 'roc_points.csv'),
                                              ('fpr', 'tpr', 'threshold'), fpr, tpr, thresholds))
            precision, recall, thresholds = pr_curve(probs, labels)
            written.append(self._write_points(os.path.join(out_dir, 'pr_points.csv'),
                                              ('recall', 'precision', 'threshold'),
                                              recall, precision, thresholds))
        if args.metrics:
            for row in read_metrics_csv(args.metrics):
                print(", ".join(f"{key}={format_value(value)}" for key, value in row.items()
                                if key != 'dataset'))
        if args.sweep:
            table = mae_table(read_convergence_csv(args.sweep))
            path = os.path.join(out_dir, 'mae_vs_n.csv')
            with open(path, 'w', newline='') as f:
                writer = csv.DictWriter(f, fieldnames=list(table[0].keys()) if table else ['n'])
                writer.writeheader()
                for row in table:
                    writer.writerow({key: repr(value) if isinstance(value, float) else value
                                     for key, value in row.items()})
            written.append(path)
        if not written and not args.metrics:
            raise ParameterError("report needs at least one of --history, --scores, --metrics, --sweep")
        for path in written:
            print(f"Wrote {path}")
        return 0

    @staticmethod
    def _read_scores(path):
        labels, probs = [], []
        with open(path, 'r', newline='') as f:
            for row in csv.DictReader(f):
                labels.append(int(row['label']))
                probs.append(parse_value(row['prob']))
        return np.array(labels), np.array(probs)

    @staticmethod
    def _write_points(path, names, *columns):
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(names)
            for values in zip(*columns):
                writer.writerow([repr(float(v)) for v in values])
        return path

    def cmd_sweep(self, args):
        """Sample-size convergence study."""
        out = self._out_path(args.out, 'convergence.csv')
        self.config.validate_paths(outputs=[out])
        seed = self.config.resolve_seed('simulation', args.seed)
        sim_config = self._sim_config(seed)
        n_values = self.config.get('sweep', 'n_values')
        seeds = self.config.get('sweep', 'seeds')
        n_test = int(self.config.get('simulation', 'n_test'))

        print(f"Convergence sweep: n in {list(n_values)}, seeds {list(seeds)}, n_test={n_test}")
        rows = run_convergence(sim_config, self._train_config(0), n_values, seeds, n_test,
                               hyper=self._hyper(sim_config.T, sim_config.p))
        write_convergence_csv(out, rows)
        for row in mae_table(rows):
            print(f"  n={row['n']:6d}  median MAE(alpha)={row['median_mae_alpha']:.4f}  "
                  f"median MAE(g)={row['median_mae_g']:.4f}")
        print(f"Wrote {out}")
        return 0


def _add_command(subparsers, name, help_text):
    keys = COMMAND_KEYS[name] + SHARED_KEYS
    epilog = "config keys:\n  " + "\n  ".join(keys)
    return subparsers.add_parser(name, help=help_text, description=help_text, epilog=epilog,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)


def _float_list(text):
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _add_sim_flags(parser):
    parser.add_argument('--d', type=int, help="simulation.d")
    parser.add_argument('--T', type=int, help="simulation.T")
    parser.add_argument('--p', type=int, help="simulation.p")
    parser.add_argument('--base-source', help="simulation.base_source: 'synthetic' or an NDLR path")
    parser.add_argument('--ar-coeffs', type=_float_list, help="simulation.ar_coeffs, comma-separated")
    parser.add_argument('--fs', type=float, help="simulation.fs")


def _add_model_flags(parser):
    parser.add_argument('--omega-widths', type=_int_list, help="model.omega_widths, comma-separated")
    parser.add_argument('--g-widths', type=_int_list, help="model.g_widths, comma-separated")
    parser.add_argument('--kernel-size', type=int, help="model.kernel_size")
    parser.add_argument('--conv-stride', type=int, help="model.stride")


def _add_training_flags(parser):
    parser.add_argument('--epochs', type=int, help="training.epochs")
    parser.add_argument('--batch-size', type=int, help="training.batch_size")
    parser.add_argument('--lr', type=float, help="training.learning_rate")
    parser.add_argument('--val-fraction', type=float, help="training.val_fraction")


def build_parser():
    """Argument parser for every command."""
    parser = argparse.ArgumentParser(
        prog='ndl',
        description="Channel-weighted spike detection: simulate, train, evaluate, rank, detect.",
        epilog=f"Seeds: flag > {SEED_ENV_VAR} environment variable > config file > 0",
    )
    parser.add_argument('--config', default=DEFAULT_CONFIG_PATH, help="YAML run configuration")
    parser.add_argument('--log-level', help="logging.level")
    parser.add_argument('--log-format', help="logging.format")
    parser.add_argument('--out-dir', dest='paths_out_dir', help="paths.out_dir")
    subparsers = parser.add_subparsers(dest='command', required=True)

    sim = _add_command(subparsers, 'simulate', "Simulate a labelled dataset with known truth")
    sim.add_argument('--out', help="Output dataset path (default <out_dir>/sim.ndls)")
    sim.add_argument('--n', type=int, help="simulation.n")
    _add_sim_flags(sim)
    sim.add_argument('--seed', type=int, help="simulation.seed")
    sim.add_argument('--test', action='store_true', help="Draw from the held-out sample stream")
    sim.add_argument('--continuous', action='store_true',
                     help="Write a continuous NDLR recording with injected motifs instead")
    sim.add_argument('--length', type=int, help="simulation.continuous_length")
    sim.add_argument('--motifs', type=int, help="simulation.motifs")
    sim.add_argument('--motif-min-g', type=float, help="simulation.motif_min_g")
    sim.add_argument('--motif-gain', type=float, help="simulation.motif_gain")
    sim.add_argument('--gate-factor', type=float,
                     help="detector.gate_factor, which every injected motif must clear")

    train = _add_command(subparsers, 'train', "Train a model on a simulated dataset")
    train.add_argument('--data', required=True, help="Dataset path")
    train.add_argument('--out', help="Model base path (default <out_dir>/model)")
    train.add_argument('--history', help="History CSV path (default <out>.history.csv)")
    _add_training_flags(train)
    _add_model_flags(train)
    train.add_argument('--checkpoint-every', type=int, help="training.checkpoint_every")
    train.add_argument('--checkpoint-dir', help="Directory for periodic checkpoints")
    train.add_argument('--seed', type=int, help="training.seed")
    train.add_argument('--init-model', help="Start from a saved model (fine-tuning)")
    train.add_argument('--resume', help="Continue from a checkpoint base path")

    ev = _add_command(subparsers, 'eval', "Evaluate a model on a dataset")
    ev.add_argument('--model', required=True, help="Model base path")
    ev.add_argument('--data', required=True, help="Dataset path")
    ev.add_argument('--threshold', type=float, help="detector.threshold")
    ev.add_argument('--out', help="Metrics CSV path (default <out_dir>/metrics.csv)")
    ev.add_argument('--scores', help="Per-segment scores CSV path")

    det = _add_command(subparsers, 'detect', "Annotate spikes in a continuous recording")
    det.add_argument('--recording', required=True, help="NDLR recording")
    det.add_argument('--model', required=True, help="Model base path")
    det.add_argument('--threshold', type=float, help="detector.threshold")
    det.add_argument('--stride', type=int, help="detector.stride")
    det.add_argument('--eps', type=float, help="detector.eps in samples")
    det.add_argument('--min-pts', type=int, help="detector.min_pts")
    det.add_argument('--gate-factor', type=float, help="detector.gate_factor")
    det.add_argument('--no-standardize', action='store_true', help="Score raw windows")
    det.add_argument('--preprocess', action='store_true',
                     help="Apply the preprocessing section (montage, band-pass) first")
    det.add_argument('--montage', help="preprocessing.montage")
    det.add_argument('--lo', type=float, help="preprocessing.lo in Hz")
    det.add_argument('--hi', type=float, help="preprocessing.hi in Hz")
    det.add_argument('--filter-order', type=int, help="preprocessing.filter_order")
    det.add_argument('--out', help="Annotation JSONL path (default <out_dir>/annotations.jsonl)")

    rank = _add_command(subparsers, 'rank', "Rank channels by learned importance")
    rank.add_argument('--model', required=True, help="Model base path")
    rank.add_argument('--data', required=True, help="Dataset path")
    rank.add_argument('--top', type=int, help="rank.top")
    rank.add_argument('--regions', help="YAML map of channel name to region")
    rank.add_argument('--out', help="Per-segment CSV path (default <out_dir>/ranking.csv)")
    rank.add_argument('--freq-out', help="Selection frequency CSV path")

    rep = _add_command(subparsers, 'report', "Write plot-ready point sets")
    rep.add_argument('--history', help="History CSV from train")
    rep.add_argument('--scores', help="Scores CSV from eval")
    rep.add_argument('--metrics', help="Metrics CSV from eval")
    rep.add_argument('--sweep', help="Convergence CSV from sweep")
    rep.add_argument('--out-dir', help="Output directory (default paths.out_dir)")

    sweep = _add_command(subparsers, 'sweep', "Sample-size convergence study")
    sweep.add_argument('--n-values', type=_int_list, help="sweep.n_values, comma-separated")
    sweep.add_argument('--seeds', type=_int_list, help="sweep.seeds, comma-separated")
    sweep.add_argument('--n-test', type=int, help="simulation.n_test")
    _add_sim_flags(sweep)
    _add_training_flags(sweep)
    _add_model_flags(sweep)
    sweep.add_argument('--seed', type=int, help="simulation.seed (fixes truth and test set)")
    sweep.add_argument('--out', help="Convergence CSV path (default <out_dir>/convergence.csv)")
    return parser


# Flag name -> (section, key)
FLAG_OVERRIDES = {
    'n': ('simulation', 'n'),
    'd': ('simulation', 'd'),
    'T': ('simulation', 'T'),
    'p': ('simulation', 'p'),
    'base_source': ('simulation', 'base_source'),
    'ar_coeffs': ('simulation', 'ar_coeffs'),
    'fs': ('simulation', 'fs'),
    'length': ('simulation', 'continuous_length'),
    'motifs': ('simulation', 'motifs'),
    'motif_min_g': ('simulation', 'motif_min_g'),
    'motif_gain': ('simulation', 'motif_gain'),
    'n_test': ('simulation', 'n_test'),
    'epochs': ('training', 'epochs'),
    'batch_size': ('training', 'batch_size'),
    'lr': ('training', 'learning_rate'),
    'val_fraction': ('training', 'val_fraction'),
    'checkpoint_every': ('training', 'checkpoint_every'),
    'omega_widths': ('model', 'omega_widths'),
    'g_widths': ('model', 'g_widths'),
    'kernel_size': ('model', 'kernel_size'),
    'conv_stride': ('model', 'stride'),
    'threshold': ('detector', 'threshold'),
    'stride': ('detector', 'stride'),
    'eps': ('detector', 'eps'),
    'min_pts': ('detector', 'min_pts'),
    'gate_factor': ('detector', 'gate_factor'),
    'montage': ('preprocessing', 'montage'),
    'lo': ('preprocessing', 'lo'),
    'hi': ('preprocessing', 'hi'),
    'filter_order': ('preprocessing', 'filter_order'),
    'top': ('rank', 'top'),
    'n_values': ('sweep', 'n_values'),
    'seeds': ('sweep', 'seeds'),
    'log_level': ('logging', 'level'),
    'log_format': ('logging', 'format'),
    'paths_out_dir': ('paths', 'out_dir'),
}


def apply_overrides(config, args):
    """Copy every set flag onto its config key."""
    for flag, (section, key) in FLAG_OVERRIDES.items():
        config.override(section, key, getattr(args, flag, None))
    if getattr(args, 'no_standardize', False):
        config.override('detector', 'standardize', False)


def setup_logging(config):
    logging.basicConfig(level=config.log_level, format=config.log_format, force=True)


def main(argv=None):
    """Main application entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = Config(args.config)
        apply_overrides(config, args)
        setup_logging(config)
        app = NdlApp(config)
        return getattr(app, f"cmd_{args.command}")(args)

    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        return 130

    except (NdlError, OSError) as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
