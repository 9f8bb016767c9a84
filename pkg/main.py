import argparse
import json
import os
import sys
import time

import pandas as pd

# Initialize logging FIRST, before any other imports that log on load
from logger_config import get_logger, log_session_start, log_session_end
logger = get_logger(__name__)

from datasets.csv_loader import load_csv, load_inputs, save_csv
from datasets.scenarios import SCENARIOS, sample_scenario
from datasets.seir import REGIONS, sample_seir
from egop.gradient import estimate_egop
from egop.transform import normalize_transform
from errors import ConfigError, DegenerateEgop, TrimError
from evaluation.metrics import mse
from harness.experiments import EXPERIMENTS, cv_bench, derived_seed, run_experiment
from harness.results import write_results
from trim.model_store import load_model, save_model
from trim.trim_model import TrimConfig, fit_model, fit_transformed
from trim_config import (
    CV_FOLDS,
    CV_REPEATS,
    EVAL_POINT_MODE,
    INDICATOR_MODE,
    LIFETIME,
    N_ITERATIONS,
    N_TREES,
    STEP,
    models_dir,
    results_dir,
)

DEFAULT_N = 100


# =============================================================================
# INPUTS
# =============================================================================

def load_training_data(args):
    """Training set from --data, --region or --scenario (in that order of precedence)."""
    if getattr(args, "data", None):
        return load_csv(args.data, args.target)
    n = args.n[0] if isinstance(args.n, list) else args.n
    seed = derived_seed(args.seed, 0)
    if getattr(args, "region", None):
        region = args.region[0] if isinstance(args.region, list) else args.region
        return sample_seir(region, n, seed)
    scenario = args.scenario[0] if isinstance(args.scenario, list) else args.scenario
    data, _ = sample_scenario(scenario or 1, n, seed)
    return data


def config_from_args(args) -> TrimConfig:
    return TrimConfig(
        lifetime=args.lifetime,
        n_trees=args.trees,
        step=args.step,
        n_iterations=args.iters,
        mode=args.mode,
        indicator_mode=args.indicator,
        eval_point_mode=args.eval_points,
        seed=args.seed,
    ).validate()


def _write_json(payload: dict, path: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_fit(args) -> int:
    config = config_from_args(args)
    data = load_training_data(args)
    started = time.perf_counter()
    model = fit_model(data, config)
    wall_time = time.perf_counter() - started

    out = args.out or os.path.join(models_dir(), "model.json")
    save_model(model, out)

    report = {
        "model": out,
        "n": data.n,
        "d": data.d,
        "train_mse": mse(model, data),
        "lambda": config.lifetime,
        "trees": config.n_trees,
        "step": config.step,
        "iterations": config.n_iterations,
        "mode": config.mode.value,
        "seed": config.seed,
        "wall_time_s": wall_time,
        "flags": list(model.flags),
    }
    if model.weights is not None:
        report["weights"] = [float(w) for w in model.weights.normalized]
        report["split_counts"] = [int(c) for c in model.forest.split_counts()]
    _write_json(report, args.report or os.path.splitext(out)[0] + ".report.json")
    print(json.dumps(report, indent=2, sort_keys=True))
    logger.info(f"fit done - train MSE {report['train_mse']:.6g}, {wall_time:.2f}s")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    if args.target:
        data = load_csv(args.data, args.target)
        X = data.X
    else:
        data = None
        X = load_inputs(args.data)
    predictions = model.predict(X)

    out = args.out or os.path.join(results_dir(), "predictions.csv")
    directory = os.path.dirname(os.path.abspath(out))
    os.makedirs(directory, exist_ok=True)
    pd.DataFrame({"prediction": predictions}).to_csv(out, index=False, float_format="%.17g")
    summary = {"predictions": out, "n": int(X.shape[0])}
    if data is not None:
        summary["mse"] = mse(model, data)
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def cmd_egop(args) -> int:
    """Fit a plain forest and emit its EGOP estimate with the normalized transform."""
    config = config_from_args(args)
    data = load_training_data(args)
    model = fit_transformed(data, None, config)
    egop = estimate_egop(model, model, data.X, config.step, config.indicator_mode)
    payload = {"egop": egop.to_dict()}
    try:
        payload["transform"] = normalize_transform(egop).to_dict()["matrix"]
    except DegenerateEgop as e:
        logger.warning(f"{e} - no transform emitted")
        payload["transform"] = None
        payload["flags"] = ["degenerate_egop"]

    out = args.out or os.path.join(results_dir(), "egop.json")
    _write_json(payload, out)
    print(out)
    return 0


def cmd_experiment(args) -> int:
    overrides = {
        "seeds": tuple(args.seed_grid) if args.seed_grid else None,
        "n_grid": tuple(args.n) if args.n else None,
        "n_trees": args.trees,
        "step": args.step,
    }
    if args.experiment == "ebola":
        overrides["regions"] = tuple(args.region) if args.region else None
    elif args.experiment != "cv_bench":
        overrides["scenarios"] = tuple(args.scenario) if args.scenario else None
    if args.experiment in ("mse_vs_lifetime", "trim_reiterate", "ebola"):
        overrides["lambda_grid"] = tuple(args.lifetime) if args.lifetime else None
    else:
        overrides["lifetime"] = args.lifetime[0] if args.lifetime else None
    if args.experiment == "mse_vs_lifetime":
        overrides["n_iterations"] = args.iters
    if args.experiment in ("trim_reiterate", "ebola") and args.iters is not None:
        overrides["iterations"] = tuple(range(1, args.iters + 1))
    if args.experiment == "cv_bench":
        if not args.data:
            raise ConfigError("cv_bench needs --data")
        data = load_csv(args.data, args.target)
        overrides = {"data": data, "label": os.path.basename(args.data), "n_trees": args.trees,
                     "seed": args.seed_grid[0] if args.seed_grid else 0}

    rows = run_experiment(args.experiment, **overrides)
    out = args.out or os.path.join(results_dir(), f"{args.experiment}.csv")
    frame = write_results(rows, out)
    print(f"{len(frame)} rows -> {out}")
    return 0


def cmd_cv(args) -> int:
    data = load_training_data(args)
    if args.data:
        label = os.path.basename(args.data)
    elif args.region:
        label = args.region[0]
    else:
        label = f"scenario{args.scenario[0] if args.scenario else 1}"
    rows = cv_bench(data, label=label, folds=args.folds, repeats=args.repeats, seed=args.seed, n_trees=args.trees)
    out = args.out or os.path.join(results_dir(), "cv_bench.csv")
    frame = write_results(rows, out)
    print(f"{len(frame)} rows -> {out}")
    return 0


def cmd_generate(args) -> int:
    if args.region:
        data = sample_seir(args.region[0], args.n[0], args.seed, noise_sd=args.noise or 0.0)
    else:
        data, _ = sample_scenario(args.scenario[0] if args.scenario else 1, args.n[0], args.seed, noise_sd=args.noise)
    out = args.out or os.path.join(results_dir(), "sample.csv")
    save_csv(data, out, target=args.target)
    print(out)
    return 0


# =============================================================================
# PARSER
# =============================================================================

def _add_source_flags(parser, many: bool = False):
    action = "append" if many else None
    parser.add_argument("--data", help="numeric CSV with a header row")
    parser.add_argument("--target", default="y", help="label column of --data (default: y)")
    parser.add_argument("--scenario", type=int, action=action, choices=sorted(SCENARIOS),
                        help="synthetic ridge scenario")
    parser.add_argument("--region", action=action, choices=REGIONS, help="SEIR parameter region")


def _add_model_flags(parser):
    parser.add_argument("--lambda", dest="lifetime", type=float, default=LIFETIME, help="Mondrian lifetime")
    parser.add_argument("--trees", type=int, default=N_TREES, help="number of trees M")
    parser.add_argument("--step", type=float, default=STEP, help="difference-quotient step t")
    parser.add_argument("--iters", type=int, default=N_ITERATIONS, help="iterations K")
    parser.add_argument("--mode", choices=("transform", "reweight"), default="transform")
    parser.add_argument("--indicator", choices=("forest", "off"), default=INDICATOR_MODE)
    parser.add_argument("--eval-points", dest="eval_points", choices=("train", "heldout"), default=EVAL_POINT_MODE)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trim", description="Transformed iterative Mondrian forests")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a TrIM or weighted Mondrian model")
    _add_source_flags(fit)
    _add_model_flags(fit)
    fit.add_argument("--n", type=int, default=DEFAULT_N, help="sample size for --scenario/--region")
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--out", help="model file (default: models/model.json)")
    fit.add_argument("--report", help="report file (default: <model>.report.json)")
    fit.set_defaults(handler=cmd_fit)

    predict = sub.add_parser("predict", help="predict with a saved model")
    predict.add_argument("--model", required=True)
    predict.add_argument("--data", required=True, help="CSV of inputs")
    predict.add_argument("--target", help="label column; reports MSE when given")
    predict.add_argument("--out", help="predictions CSV")
    predict.set_defaults(handler=cmd_predict)

    egop = sub.add_parser("egop", help="estimate the EGOP of a plain forest")
    _add_source_flags(egop)
    _add_model_flags(egop)
    egop.add_argument("--n", type=int, default=DEFAULT_N)
    egop.add_argument("--seed", type=int, default=0)
    egop.add_argument("--out")
    egop.set_defaults(handler=cmd_egop)

    experiment = sub.add_parser("experiment", help="run a study and write long-format CSV")
    experiment.add_argument("experiment", choices=EXPERIMENTS)
    _add_source_flags(experiment, many=True)
    experiment.add_argument("--n", type=int, action="append", help="sample size (repeatable)")
    experiment.add_argument("--lambda", dest="lifetime", type=float, action="append", help="lifetime (repeatable)")
    experiment.add_argument("--trees", type=int)
    experiment.add_argument("--step", type=float)
    experiment.add_argument("--iters", type=int)
    experiment.add_argument("--seed", dest="seed_grid", type=int, action="append", help="seed (repeatable)")
    experiment.add_argument("--out")
    experiment.set_defaults(handler=cmd_experiment)

    cv = sub.add_parser("cv", help="repeated K-fold MF vs TrIM benchmark")
    _add_source_flags(cv, many=True)
    cv.add_argument("--n", type=int, action="append", default=None)
    cv.add_argument("--folds", type=int, default=CV_FOLDS)
    cv.add_argument("--repeats", type=int, default=CV_REPEATS)
    cv.add_argument("--trees", type=int, default=N_TREES)
    cv.add_argument("--seed", type=int, default=0)
    cv.add_argument("--out")
    cv.set_defaults(handler=cmd_cv)

    generate = sub.add_parser("generate", help="write a synthetic or SEIR sample as CSV")
    _add_source_flags(generate, many=True)
    generate.add_argument("--n", type=int, action="append", default=None)
    generate.add_argument("--noise", type=float, default=None, help="label noise sd")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--out")
    generate.set_defaults(handler=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("cv", "generate") and args.n is None:
        args.n = [DEFAULT_N]

    log_session_start(args.command)
    try:
        return args.handler(args)
    except TrimError as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        print(e.one_line(), file=sys.stderr)
        return 1
    except Exception as e:
        logger.error(f"Unhandled error in {args.command}: {e}", exc_info=True)
        print(f"error[internal]: {' '.join(str(e).split())}", file=sys.stderr)
        return 1
    finally:
        log_session_end()


if __name__ == "__main__":
    sys.exit(main())
