"""
ShapeletBoard - Command Line Interface
Train shapelets, transform, cluster and evaluate UCR datasets reproducibly
"""

import argparse
import logging
import os
import sys
import time
from pathlib import Path

import pandas as pd

from artifacts import build_manifest, manifest_path_for, write_frame_csv, write_json, write_matrix_csv
from clustering import evaluate_pipeline, save_report, transform
from config import (
    BENCHMARK_VERSION,
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    DEFAULT_FEATURE_KIND,
    DEFAULT_LAMBDA,
    DEFAULT_LEARNING_RATE,
    DEFAULT_MAX_ITERS,
    DEFAULT_PREPROCESS,
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    DEFAULT_TRIM_EPSILON,
    ENV_PREFIX,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    FEATURE_KINDS,
    LOSS_COLUMNS,
    PREPROCESS_MODES,
    STATS_VERSION,
    TOOL_NAME,
    TOOL_VERSION,
    get_text,
)
from dataset import describe, load_ucr, merge
from errors import ConfigError, ShapeletBoardError
from training import COUNT_BASES, TrainConfig, load_model, save_model, train

logger = logging.getLogger(__name__)

TRUE_VALUES = ("1", "true", "yes", "on")
FALSE_VALUES = ("0", "false", "no", "off", "")


def _env_name(dest):
    return ENV_PREFIX + dest.rstrip("_").upper()


def _env_flag(name, value):
    text = value.strip().lower()
    if text in TRUE_VALUES:
        return True
    if text in FALSE_VALUES:
        return False
    raise ConfigError(f"{name}={value!r} is not a boolean")


def _one_of(choices):
    def check(value):
        if value not in choices:
            raise argparse.ArgumentTypeError(f"{value!r} is not one of {list(choices)}")
        return value

    return check


def _option(parser, *flags, environ=None, **kwargs):
    """add_argument whose default can be overridden by SHAPELET_<DEST>"""
    action = parser.add_argument(*flags, **kwargs)
    name = _env_name(action.dest)
    value = (environ or {}).get(name)
    if value is None:
        return action
    if action.nargs == 0:
        # the variable names the destination: SHAPELET_BACKOFF=false turns backoff off
        action.default = _env_flag(name, value)
    elif action.nargs in ("+", "*"):
        convert = action.type or str
        try:
            action.default = [convert(v) for v in value.split()]
        except (ValueError, argparse.ArgumentTypeError) as e:
            raise ConfigError(f"{name}={value!r}: {e}") from e
    else:
        if action.choices is not None and action.type is None:
            action.type = _one_of(action.choices)
        # argparse runs string defaults through action.type, for the chosen command only
        action.default = value
    action.required = False
    return action


def _count(value):
    if value == "auto":
        return 0
    try:
        count = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {value!r}")
    if count < 1:
        raise argparse.ArgumentTypeError(f"shapelet count must be >= 1, got {count}")
    return count


def _sigma(value):
    if value == "auto":
        return 0.0
    try:
        sigma = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {value!r}")
    if not sigma > 0:
        raise argparse.ArgumentTypeError(f"sigma must be positive, got {sigma}")
    return sigma


def _positive_int(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}")
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {number}")
    return number


def _add_data_options(parser, environ, required=True):
    _option(parser, "--data", required=required, environ=environ, help="UCR file (training split)")
    _option(parser, "--test", default=None, environ=environ, help="UCR file (test split), merged with --data")
    _option(parser, "--delimiter", default=",", environ=environ, help="field delimiter: ',', 'tab' or 'whitespace'")


def _add_runtime_options(parser, environ):
    _option(parser, "--threads", type=_positive_int, default=1, environ=environ, help="worker threads for distance tensors")


def _add_train_options(parser, environ, with_seed=True):
    _option(parser, "--length", type=int, required=True, environ=environ, help="nominal shapelet length M")
    _option(parser, "--count", type=_count, default=0, environ=environ, help="shapelet count K or 'auto'")
    _option(parser, "--count-basis", choices=COUNT_BASES, default="train", environ=environ, help="sample count used by auto K")
    _option(parser, "--alpha", type=float, default=DEFAULT_ALPHA, environ=environ, help="Student-t degrees of freedom")
    _option(parser, "--lambda", dest="lambda_", type=float, default=DEFAULT_LAMBDA, environ=environ, help="diversity weight")
    _option(parser, "--beta", type=float, default=DEFAULT_BETA, environ=environ, help="L1 weight")
    _option(parser, "--sigma", type=_sigma, default=0.0, environ=environ, help="affinity kernel variance or 'auto'")
    _option(parser, "--lr", type=float, default=DEFAULT_LEARNING_RATE, environ=environ, help="learning rate")
    _option(parser, "--iters", type=int, default=DEFAULT_MAX_ITERS, environ=environ, help="maximum iterations")
    _option(parser, "--tolerance", type=float, default=DEFAULT_TOLERANCE, environ=environ, help="relative loss change to stop at")
    _option(parser, "--trim-epsilon", type=float, default=DEFAULT_TRIM_EPSILON, environ=environ, help="relative trimming threshold")
    _option(parser, "--preprocess", choices=PREPROCESS_MODES, default=DEFAULT_PREPROCESS, environ=environ, help="per-series preprocessing")
    _option(parser, "--no-backoff", dest="backoff", action="store_false", environ=environ, help="disable step-size backoff")
    if with_seed:
        _option(parser, "--seed", type=int, default=DEFAULT_SEED, environ=environ, help="random seed")


def build_parser(environ=None):
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME, description="Unsupervised shapelet learning and clustering evaluation"
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    _option(parser, "-v", "--verbose", action="store_true", environ=environ, help="debug logging")
    _option(parser, "-q", "--quiet", action="store_true", environ=environ, help="warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("train", help="learn a shapelet bank")
    _add_data_options(p, environ)
    _add_train_options(p, environ)
    _add_runtime_options(p, environ)
    _option(p, "--out", default="model.json", environ=environ, help="model JSON path")

    p = commands.add_parser("evaluate", help="cluster features and score with the Rand Index")
    _add_data_options(p, environ)
    _option(p, "--model", default=None, environ=environ, help="model JSON (not needed for raw features)")
    _option(p, "--features", choices=FEATURE_KINDS, default=DEFAULT_FEATURE_KIND, environ=environ, help="raw series, distances F or memberships q")
    _option(p, "--seed", type=int, default=DEFAULT_SEED, environ=environ, help="K-means seed")
    _option(p, "--restarts", type=_positive_int, default=DEFAULT_RESTARTS, environ=environ, help="K-means restarts")
    _add_runtime_options(p, environ)
    _option(p, "--out", default="report.json", environ=environ, help="report JSON path")

    p = commands.add_parser("export", help="write shapelets, features or loss history as CSV")
    _option(p, "--model", required=True, environ=environ, help="model JSON")
    _option(p, "--what", choices=("shapelets", "features", "loss"), required=True, environ=environ, help="what to export")
    _add_data_options(p, environ, required=False)
    _add_runtime_options(p, environ)
    _option(p, "--out", required=True, environ=environ, help="CSV path")

    p = commands.add_parser("stats", help="print dataset statistics")
    _add_data_options(p, environ)
    _option(p, "--name", default=None, environ=environ, help="dataset name to print")
    _option(p, "--out", default="stats.json", environ=environ, help="statistics JSON path")

    p = commands.add_parser("benchmark", help="best Rand Index over several training seeds")
    _add_data_options(p, environ)
    _add_train_options(p, environ, with_seed=False)
    _option(p, "--seeds", type=int, nargs="+", default=[0, 1, 2, 3, 4], environ=environ, help="training and clustering seeds")
    _option(p, "--features", choices=("F", "q"), default=DEFAULT_FEATURE_KIND, environ=environ, help="learned feature kind")
    _option(p, "--restarts", type=_positive_int, default=DEFAULT_RESTARTS, environ=environ, help="K-means restarts")
    _add_runtime_options(p, environ)
    _option(p, "--out", default="benchmark.json", environ=environ, help="summary JSON path")
    return parser


def _configure_logging(args):
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _load_inputs(args):
    """Returns the training split and the dataset to work on (train + test when given)"""
    train_split = load_ucr(args.data, args.delimiter)
    if not args.test:
        return train_split, train_split
    return train_split, merge(train_split, load_ucr(args.test, args.delimiter))


def _train_config(args, seed=None):
    return TrainConfig(
        shapelet_length=args.length,
        shapelet_count=args.count,
        alpha=args.alpha,
        lambda_=args.lambda_,
        beta=args.beta,
        sigma_sq=args.sigma,
        learning_rate=args.lr,
        max_iters=args.iters,
        tolerance=args.tolerance,
        seed=args.seed if seed is None else seed,
        preprocess=args.preprocess,
        trim_epsilon=args.trim_epsilon,
        backoff=args.backoff,
        count_basis=args.count_basis,
    )


def _write_manifest(args, config, outputs, started):
    manifest = build_manifest(
        command=args.command,
        config=config,
        inputs=[getattr(args, "data", None), getattr(args, "test", None), getattr(args, "model", None)],
        outputs=outputs,
        duration_seconds=time.perf_counter() - started,
        threads=getattr(args, "threads", 1),
    )
    manifest["arguments"] = {k: v for k, v in vars(args).items() if k not in ("verbose", "quiet")}
    path = manifest_path_for(outputs[0])
    write_json(path, manifest)
    logger.info("Manifest written to %s", path)


def cmd_train(args):
    started = time.perf_counter()
    config = _train_config(args)
    train_split, dataset = _load_inputs(args)
    model = train(
        dataset,
        config,
        n_train=train_split.n_samples if args.test else None,
        n_threads=args.threads,
    )
    save_model(model, args.out)
    _write_manifest(args, model.config.to_dict(), [args.out], started)
    final = model.loss_history[-1].total if model.loss_history else float("nan")
    print(get_text("train_done", count=model.bank.count, iterations=model.n_iterations, loss=final))
    return EXIT_OK


def cmd_evaluate(args):
    started = time.perf_counter()
    if args.features != "raw" and not args.model:
        raise ConfigError(get_text("model_required", kind=args.features))
    _, dataset = _load_inputs(args)
    model = load_model(args.model) if args.model else None
    report = evaluate_pipeline(
        dataset,
        model,
        feature_kind=args.features,
        seed=args.seed,
        restarts=args.restarts,
        n_threads=args.threads,
    )
    save_report(report, args.out)
    config = {
        "features": args.features,
        "seed": args.seed,
        "restarts": args.restarts,
        "model_config": model.config.to_dict() if model else None,
    }
    _write_manifest(args, config, [args.out], started)
    print(get_text("rand_index", value=report.rand_index))
    return EXIT_OK


def cmd_export(args):
    started = time.perf_counter()
    model = load_model(args.model)
    if args.what == "shapelets":
        write_matrix_csv(args.out, model.bank.shapelets)
    elif args.what == "features":
        if not args.data:
            raise ConfigError(get_text("data_required", what=args.what))
        _, dataset = _load_inputs(args)
        write_frame_csv(args.out, pd.DataFrame(transform(model, dataset, n_threads=args.threads).f), header=False)
    else:
        frame = pd.DataFrame([entry.to_dict() for entry in model.loss_history], columns=LOSS_COLUMNS)
        frame.insert(0, "iteration", range(1, len(frame) + 1))
        write_frame_csv(args.out, frame)
    _write_manifest(args, {"what": args.what, "model_config": model.config.to_dict()}, [args.out], started)
    logger.info(get_text("wrote", what=args.what, path=args.out))
    return EXIT_OK


def cmd_stats(args):
    started = time.perf_counter()
    train_split = load_ucr(args.data, args.delimiter)
    test_split = load_ucr(args.test, args.delimiter) if args.test else None
    summary = describe(train_split, test_split, name=args.name or Path(args.data).stem)
    write_json(args.out, {"version": STATS_VERSION, **summary.to_dict()})
    _write_manifest(args, {"name": summary.name}, [args.out], started)
    print(
        get_text(
            "stats_line",
            name=summary.name,
            train=summary.n_train,
            test=summary.n_test,
            total=summary.n_total,
            length=summary.series_length,
            classes=summary.n_classes,
            counts=summary.counts_text(),
        )
    )
    return EXIT_OK


def cmd_benchmark(args):
    started = time.perf_counter()
    train_split, dataset = _load_inputs(args)
    n_train = train_split.n_samples if args.test else None

    raw = evaluate_pipeline(dataset, None, "raw", seed=args.seeds[0], restarts=args.restarts)
    runs = []
    config = None
    for seed in args.seeds:
        model = train(dataset, _train_config(args, seed=seed), n_train=n_train, n_threads=args.threads)
        config = config or model.config.to_dict()
        report = evaluate_pipeline(
            dataset, model, args.features, seed=seed, restarts=args.restarts, n_threads=args.threads
        )
        print(get_text("seed_result", seed=seed, value=report.rand_index))
        runs.append(
            {
                "seed": seed,
                "rand_index": report.rand_index,
                "iterations": model.n_iterations,
                "shapelet_count": model.bank.count,
                "final_loss": model.loss_history[-1].total if model.loss_history else None,
            }
        )

    best = max(runs, key=lambda run: run["rand_index"])
    write_json(
        args.out,
        {
            "version": BENCHMARK_VERSION,
            "dataset": Path(args.data).stem,
            "features": args.features,
            "raw": raw.to_dict(),
            "runs": runs,
            "best_seed": best["seed"],
            "best_rand_index": best["rand_index"],
            "config": config,
        },
    )
    _write_manifest(args, config, [args.out], started)
    print(get_text("benchmark_summary", best=best["rand_index"], raw=raw.rand_index))
    return EXIT_OK


COMMANDS = {
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "export": cmd_export,
    "stats": cmd_stats,
    "benchmark": cmd_benchmark,
}


def main(argv=None, environ=None):
    environ = os.environ if environ is None else environ
    try:
        parser = build_parser(environ)
        args = parser.parse_args(argv)
    except ConfigError as e:
        print(get_text("config_error", detail=e), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        logger.error(get_text("config_error", detail=e))
        return e.exit_code
    except ShapeletBoardError as e:
        key = "diverged" if e.exit_code == EXIT_NUMERICAL else "data_error"
        logger.error(get_text(key, detail=e))
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
