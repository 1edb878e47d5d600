"""Command-line interface.

Subcommands: ``simulate`` (write a generated dataset + truth sidecar),
``analyze`` (static or dynamic network analysis of a CSV dataset),
``theory`` (exact three-node measure sweeps), ``benchmark`` (Monte-Carlo
reconstruction performance), and ``derive`` (beat-series transforms).

The seed comes from --seed, else the HOINET_SEED environment variable, else 0;
all randomized commands are bit-reproducible for a fixed seed.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import dataio
from .errors import HoinetError
from .generators import (
    Binary10Params,
    ThreeNodeDynamicParams,
    ThreeNodeStaticParams,
    VarStarsParams,
    exact_three_node_dynamic,
    exact_three_node_static,
    gen_binary10,
    gen_three_node_dynamic,
    gen_three_node_static,
    gen_var_stars,
)
from .network import analyze_dynamic, analyze_static, benchmark, standard_scenario
from .physio import (
    derive_cardiac_output,
    derive_discrete,
    derive_peripheral_resistance,
)
from .surrogates import SurrogateConfig

SEED_ENV = "HOINET_SEED"
LN2 = math.log(2.0)


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get(SEED_ENV)
    return int(env) if env else 0


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _parse_float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part]


def _write_simulated(args, dataset, truth, generator, params) -> int:
    dataio.write_dataset(args.output, dataset)
    dataio.write_sidecar(args.output, {
        "generator": generator,
        "params": params,
        "n": dataset.n,
        "seed": _resolve_seed(args.seed),
        "channels": list(dataset.channel_names),
        "truth_adjacency": truth.astype(int),
    })
    print(f"wrote {args.output} ({dataset.n} x {dataset.m}) "
          f"and {dataio.sidecar_path(args.output)}")
    return 0


def cmd_simulate(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.system == "three-node-static":
        params = ThreeNodeStaticParams(args.alpha, args.beta, args.gamma)
        ds, truth = gen_three_node_static(params, args.n, np.random.default_rng([seed]))
        return _write_simulated(args, ds, truth, args.system, asdict(params))
    if args.system == "three-node-dynamic":
        params = ThreeNodeDynamicParams(args.a, args.b, args.c)
        series, truth = gen_three_node_dynamic(params, args.n, np.random.default_rng([seed]))
        return _write_simulated(args, series, truth, args.system, asdict(params))
    if args.system == "binary10":
        params = Binary10Params(args.gamma1, args.gamma2, args.gamma3, args.n, seed)
        ds, truth = gen_binary10(params)
        return _write_simulated(args, ds, truth, args.system, asdict(params))
    params = VarStarsParams(args.structure, args.hub_out, args.other_arm, args.n, seed)
    series, truth = gen_var_stars(params)
    return _write_simulated(args, series, truth, args.system, asdict(params))


def cmd_analyze(args) -> int:
    seed = _resolve_seed(args.seed)
    dataset = dataio.read_dataset(args.input, args.mode)
    method = "shuffle" if args.mode == "static" else "iaaft"
    config = SurrogateConfig(count=args.surrogates, alpha=args.alpha, method=method,
                             iaaft_max_iter=args.iaaft_max_iter, master_seed=seed)
    if args.mode == "static":
        result = analyze_static(dataset, config)
    else:
        result = analyze_dynamic(dataset, config, p_max=args.p_max, q=args.q)
    dataio.write_result(result, args.output_json, args.output_dot, bits=args.bits)
    edges = int(result.adjacency.sum()) // 2
    print(f"analyzed {args.input}: {result.m} nodes, {edges} reconstructed links "
          f"-> {args.output_json}" + (f", {args.output_dot}" if args.output_dot else ""))
    return 0


def _theory_rows_static(step: float, beta: float):
    alphas = np.arange(0.5, 1.0 + 1e-9, step)
    for alpha in alphas:
        alpha = float(min(alpha, 1.0))
        gamma = 1.5 - alpha
        params = ThreeNodeStaticParams(alpha=alpha, beta=beta, gamma=gamma)
        yield {"alpha": alpha, "beta": beta, "gamma": gamma}, exact_three_node_static(params)


def _theory_rows_dynamic(step: float, b: float, q: int):
    for a in np.arange(0.0, 1.0 + 1e-9, step):
        a = float(min(a, 1.0))
        params = ThreeNodeDynamicParams(a=a, b=b, c=1.0 - a)
        yield {"a": a, "b": b, "c": 1.0 - a}, exact_three_node_dynamic(params, q=q)


def cmd_theory(args) -> int:
    if not args.sweep:
        raise ValueError("theory three-node currently only supports --sweep")
    scale = 1.0 / LN2 if args.bits else 1.0
    if args.kind == "static":
        step = args.step if args.step is not None else 0.025
        rows = _theory_rows_static(step, args.beta)
        param_names = ["alpha", "beta", "gamma"]
    else:
        step = args.step if args.step is not None else 0.05
        rows = _theory_rows_dynamic(step, args.b, args.q)
        param_names = ["a", "b", "c"]
    pair_names = [("S1", "S2"), ("S1", "S3"), ("S2", "S3")]
    header = list(param_names)
    for a, b in pair_names:
        header += [f"is_{a}_{b}", f"cis_{a}_{b}", f"nis_{a}_{b}", f"b_{a}_{b}"]
    count = 0
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for params, links in rows:
            row = [repr(round(params[k], 12)) for k in param_names]
            for (i, j) in ((0, 1), (0, 2), (1, 2)):
                link = links[(i, j)]
                row += [repr(link.is_value * scale), repr(link.cis_value * scale),
                        repr(link.nis_value * scale),
                        "" if math.isnan(link.b_index) else repr(link.b_index)]
            writer.writerow(row)
            count += 1
    print(f"wrote {count} sweep points to {args.output}")
    return 0


def cmd_benchmark(args) -> int:
    seed = _resolve_seed(args.seed)
    arms = _parse_float_list(args.arms) if args.arms else None
    scenario = standard_scenario(args.scenario, arms=arms)
    method = "shuffle" if scenario.mode == "static" else "iaaft"
    config = SurrogateConfig(count=args.surrogates, alpha=args.alpha, method=method,
                             iaaft_max_iter=args.iaaft_max_iter, master_seed=seed)

    progress = None
    if args.verbose:
        def progress(rec, done, total):
            status = f"FAILED ({rec.error})" if rec.failed else \
                f"tp={rec.tp} fp={rec.fp} tn={rec.tn} fn={rec.fn}"
            print(f"[{done}/{total}] {rec.point_label} N={rec.n} run={rec.run_index}: "
                  f"{status}", file=sys.stderr)

    start = time.time()
    report = benchmark(scenario, _parse_int_list(args.lengths), args.runs, config,
                       p_max=args.p_max, q=args.q, jobs=args.jobs, progress=progress)
    runs_path = Path(args.output).with_suffix(".runs.csv")
    dataio.write_benchmark_report(report, args.output, runs_path)
    print(f"benchmark {args.scenario} finished in {time.time() - start:.1f} s")
    for cell in report.cells():
        print(f"  {cell.point_label} N={cell.n}: sensitivity={cell.sensitivity:.3f} "
              f"specificity={cell.specificity:.3f} "
              f"({cell.completed}/{cell.requested} runs, {cell.failed} failed)")
    print(f"wrote {args.output} and {runs_path}")
    return 0


def cmd_derive(args) -> int:
    series = dataio.read_beat_series(args.input)
    kind = args.kind.lower()
    if kind in ("hv", "sv", "rp"):
        values = derive_discrete(kind, series)
    elif kind == "co":
        values = derive_cardiac_output(series, beta=args.beta)
    else:
        co = derive_cardiac_output(series, beta=args.beta)
        values = derive_peripheral_resistance(series, co)
    dataio.write_column(args.output, kind.upper(), values)
    print(f"wrote {values.size} {kind.upper()} values to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hoinet",
        description="High-order link analysis and reconstruction of "
                    "static/dynamic networks")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a simulated dataset + truth sidecar")
    sim_sub = sim.add_subparsers(dest="system", required=True)

    def add_common_sim(p, default_n):
        p.add_argument("--n", type=int, default=default_n, help="observations/samples")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--output", required=True)
        p.set_defaults(func=cmd_simulate)

    p = sim_sub.add_parser("three-node-static", help="binary triple S1->S2, {S1,S2}->S3")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.9)
    p.add_argument("--gamma", type=float, default=0.9)
    add_common_sim(p, 1000)

    p = sim_sub.add_parser("three-node-dynamic", help="trivariate VAR(1) triple")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.5)
    add_common_sim(p, 1000)

    p = sim_sub.add_parser("binary10", help="ten-node binary network")
    p.add_argument("--gamma1", type=float, default=0.9)
    p.add_argument("--gamma2", type=float, default=0.9)
    p.add_argument("--gamma3", type=float, default=0.8)
    add_common_sim(p, 1000)

    p = sim_sub.add_parser("var-stars", help="six-node VAR(2) star network")
    p.add_argument("--structure", choices=["competing", "propagation"], required=True)
    p.add_argument("--hub-out", type=float, default=0.5, dest="hub_out")
    p.add_argument("--other-arm", type=float, default=0.5, dest="other_arm")
    add_common_sim(p, 1000)

    p = sub.add_parser("analyze", help="full network analysis of a CSV dataset")
    p.add_argument("--mode", choices=["static", "dynamic"], required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output-json", required=True)
    p.add_argument("--output-dot", default=None)
    p.add_argument("--surrogates", type=int, default=100)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--iaaft-max-iter", type=int, default=100)
    p.add_argument("--p-max", type=int, default=20)
    p.add_argument("--q", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--bits", action="store_true",
                   help="display measures in bits instead of nats")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("theory", help="exact measure curves of the theoretical systems")
    theory_sub = p.add_subparsers(dest="system", required=True)
    p = theory_sub.add_parser("three-node")
    p.add_argument("--kind", choices=["static", "dynamic"], required=True)
    p.add_argument("--sweep", action="store_true",
                   help="sweep the coupling parameter (alpha or a)")
    p.add_argument("--step", type=float, default=None,
                   help="sweep step (default 0.025 static, 0.05 dynamic)")
    p.add_argument("--beta", type=float, default=0.9, help="static S1->S3 reliability")
    p.add_argument("--b", type=float, default=1.0, help="dynamic S1->S3 coupling")
    p.add_argument("--q", type=int, default=20)
    p.add_argument("--bits", action="store_true")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("benchmark", help="sensitivity/specificity benchmark")
    p.add_argument("--scenario", required=True,
                   choices=["binary10", "var-stars-competing", "var-stars-propagation"])
    p.add_argument("--lengths", default="250,500,1000",
                   help="comma-separated dataset sizes")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--arms", default=None,
                   help="comma-separated hub weights for var-stars scenarios")
    p.add_argument("--surrogates", type=int, default=100)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--iaaft-max-iter", type=int, default=100)
    p.add_argument("--p-max", type=int, default=20)
    p.add_argument("--q", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--verbose", action="store_true")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("derive", help="beat-to-beat variable derivations")
    p.add_argument("--kind", choices=["hv", "sv", "rp", "co", "pr"], required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--beta", type=float, default=1.0,
                   help="stroke volume calibration factor (co/pr)")
    p.set_defaults(func=cmd_derive)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (HoinetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
