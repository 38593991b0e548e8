"""Command-line front end.

Every subcommand reads an optional JSON config, runs one library entry point
and writes a table (CSV) or a JSON document. Exit codes: 0 on success, 1 on
invalid input, 2 when the invariant suite reports a failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .encoders.ubse import verify_ubse
from .errors import MatrampError, ValidationError
from .estimators.baselines import direct_ae_baseline, direct_hadamard_baseline
from .estimators.sampling import amplitude_estimation_run, hadamard_test_run
from .estimators.tasks import EstimationTask
from .experiments.design import two_design_check
from .experiments.extreme import METHODS, run_extreme_case
from .experiments.gibbs import gibbs_demo, random_two_local
from .experiments.regimes import run_regime_sweep
from .experiments.tables import ResultTable, dumps_json, fmt_float
from .matrixize import entropy_report
from .parsing import dmse_from_spec, load_json, ubse_from_spec
from .verify import run_invariant_suite

COMMANDS = ("encode-b", "encode-a", "estimate", "bench-extreme", "regime-sweep",
            "two-design", "gibbs-demo", "verify")


@dataclass(frozen=True)
class RunConfig:
    command: str
    config: str | None = None
    n: int | None = None
    epsilon: float | None = None
    delta: float | None = None
    seed: int = 0
    shots: int | None = None
    method: str | None = None
    out: str | None = None
    fmt: str = "json"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.config is not None and not Path(self.config).exists():
            raise ValidationError(f"config file not found: {self.config}")
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise ValidationError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.delta is not None and not 0 < self.delta < 1:
            raise ValidationError(f"delta must lie in (0, 1), got {self.delta}")
        if self.method is not None and self.method not in METHODS:
            raise ValidationError(f"method must be one of {METHODS}")
        if self.fmt not in ("csv", "json"):
            raise ValidationError("format must be csv or json")
        if self.shots is not None and self.shots < 1:
            raise ValidationError("shots must be positive")
        if self.seed < 0:
            raise ValidationError("seed must be non-negative")

    def load(self) -> dict:
        if self.config is None:
            return {}
        obj = load_json(self.config)
        if not isinstance(obj, dict):
            raise ValidationError("config must be a JSON object")
        return obj


def _record_text(record: dict, fmt: str) -> str:
    """A flat record as JSON, or as a two-column ``key,value`` CSV."""
    if fmt == "json":
        return dumps_json(record)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("key", "value"))
    for key in sorted(record):
        value = record[key]
        if isinstance(value, (list, tuple, dict)):
            value = json.dumps(value, sort_keys=True)
        w.writerow((key, fmt_float(value)))
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str, default_name: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    out = Path(cfg.out)
    if out.is_dir() or not out.suffix:
        out.mkdir(parents=True, exist_ok=True)
        out = out / f"{default_name}.{cfg.fmt}"
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _emit_table(cfg: RunConfig, table: ResultTable) -> None:
    _emit(cfg, table.to_csv() if cfg.fmt == "csv" else table.to_json(), table.filename)


def _cmd_encode_b(cfg: RunConfig, conf: dict) -> None:
    u = ubse_from_spec(conf.get("b", conf))
    rep = entropy_report(u.b)
    record = {"n": u.n, "k": u.k, "lam": u.lam, "lambda_max": rep.lambda_max,
              "h_inf": rep.h_inf, "residual": verify_ubse(u)}
    _emit(cfg, _record_text(record, cfg.fmt), f"encode-b_{u.n}")


def _cmd_encode_a(cfg: RunConfig, conf: dict) -> None:
    dm, ch = dmse_from_spec(conf.get("a", conf))
    rep = entropy_report(dm.a)
    record = {"n": dm.n, "gamma": dm.gamma, "gamma_max": rep.gamma_max, "h_half": rep.h_half,
              "residual": dm.residual(), "eta": 1.0 if ch is None else ch.eta,
              "stages": 0 if ch is None else len(ch.stages)}
    _emit(cfg, _record_text(record, cfg.fmt), f"encode-a_{dm.n}")


def _cmd_estimate(cfg: RunConfig, conf: dict) -> None:
    if "a" not in conf or "b" not in conf:
        raise ValidationError("estimate needs a config with 'a' and 'b' specs")
    dm, _ = dmse_from_spec(conf["a"])
    u = ubse_from_spec(conf["b"])
    method = cfg.method or conf.get("method", "indirect-hl")
    if method not in METHODS:
        raise ValidationError(f"method must be one of {METHODS}")
    task = EstimationTask(conf.get("target", "real"), u, dm,
                          cfg.epsilon or conf.get("epsilon", 0.1),
                          cfg.delta or conf.get("delta", 0.05), seed=cfg.seed,
                          self_measure=bool(conf.get("self_measure", False)))
    rng = np.random.default_rng(cfg.seed)
    if method == "indirect-sql":
        res = hadamard_test_run(task, rng)
    elif method == "indirect-hl":
        res = amplitude_estimation_run(task, rng)
    elif method == "direct-sql":
        res = direct_hadamard_baseline(dm.a, u.b, task.epsilon, task.delta, rng,
                                       task.target, cfg.seed)
    else:
        res = direct_ae_baseline(dm.a, u.b, task.epsilon, task.delta, rng, task.target,
                                 cfg.seed)
    name = f"estimate_{task.n}_{cfg.seed}"
    if cfg.fmt == "json":
        _emit(cfg, dumps_json(res.to_dict()), name)
        return
    table = ResultTable("estimate", task.n, [cfg.seed])
    table.rows.append({"scenario": "estimate", "method": method, "n": task.n,
                       "mu_exact": res.exact_value, "estimate": res.estimate,
                       "epsilon": task.epsilon, "delta": task.delta, "shots": res.shots,
                       "queries": res.queries_used, "seed": cfg.seed})
    _emit(cfg, table.to_csv(), name)


def _cmd_bench(cfg: RunConfig, conf: dict) -> None:
    n = cfg.n or int(conf.get("n", 4))
    count = int(conf.get("num_seeds", 50))
    seeds = conf.get("seeds", list(range(cfg.seed, cfg.seed + count)))
    methods = (cfg.method,) if cfg.method else tuple(conf.get("methods", METHODS))
    table = run_extreme_case(n, cfg.epsilon or conf.get("epsilon", 0.25),
                             cfg.delta or conf.get("delta", 0.05), seeds, methods,
                             tuple(conf.get("targets", ("sqrt", "full"))))
    _emit_table(cfg, table)


def _cmd_sweep(cfg: RunConfig, conf: dict) -> None:
    table = run_regime_sweep(
        depths=conf.get("depths", list(range(1, 7))),
        times=conf.get("times", [0.1, 0.25, 0.5, 1.0]),
        b_norms=conf.get("b_norms", [1.0]),
        n=cfg.n or int(conf.get("n", 2)),
    )
    _emit_table(cfg, table)


def _cmd_design(cfg: RunConfig, conf: dict) -> None:
    ns = [cfg.n] if cfg.n else conf.get("ns", [1, 2])
    samples = cfg.shots or int(conf.get("mc_samples", 10_000))
    table = ResultTable("two-design", max(ns), [cfg.seed],
                        columns=("n", "exact_distance", "bound", "mc_distance", "mc_samples",
                                 "max_z"))
    for i, n in enumerate(ns):
        rep = two_design_check(n, samples, np.random.default_rng([cfg.seed, i]))
        table.rows.append({"n": n, "exact_distance": rep.exact_distance, "bound": rep.bound,
                           "mc_distance": rep.mc_distance, "mc_samples": samples,
                           "max_z": max(rep.mc_z_scores), "z_scores": list(rep.mc_z_scores)})
    _emit_table(cfg, table)


def _cmd_gibbs(cfg: RunConfig, conf: dict) -> None:
    beta = float(conf.get("beta", 1.0))
    if "terms" in conf:
        terms = [(float(t["coeff"]), str(t["pauli"]).upper()) for t in conf["terms"]]
    else:
        terms = random_two_local(cfg.n or int(conf.get("n", 3)),
                                 np.random.default_rng(cfg.seed))
    rep = gibbs_demo(terms, beta)
    record = {"n": rep.n, "beta": rep.beta, "gamma": rep.gamma,
              "gamma_formula": rep.gamma_formula,
              "purification_error": rep.purification_error,
              "spectral_gamma_lambda": rep.spectral_gamma_lambda,
              "spectral_closed_form": rep.spectral_closed_form}
    _emit(cfg, _record_text(record, cfg.fmt), f"gibbs_{rep.n}_{cfg.seed}")


def _cmd_verify(cfg: RunConfig, conf: dict) -> int:
    results = run_invariant_suite(cfg.seed)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} invariants hold")
    return 2 if failed else 0


HANDLERS = {
    "encode-b": _cmd_encode_b,
    "encode-a": _cmd_encode_a,
    "estimate": _cmd_estimate,
    "bench-extreme": _cmd_bench,
    "regime-sweep": _cmd_sweep,
    "two-design": _cmd_design,
    "gibbs-demo": _cmd_gibbs,
    "verify": _cmd_verify,
}


def dispatch(cfg: RunConfig) -> int:
    try:
        return HANDLERS[cfg.command](cfg, cfg.load()) or 0
    except (MatrampError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="matramp", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON config or spec file")
    p.add_argument("--n", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shots", type=int, help="override sample counts where supported")
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--out", help="output file or directory (default: stdout)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="json")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
