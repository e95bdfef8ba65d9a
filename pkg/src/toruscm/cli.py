"""Command-line harness for the compartment-model experiments.

Subcommands cover the extinction probability, one-off graph generation and
analysis, the Monte Carlo scenarios, and the closed-form bound evaluators.
Given the same config, seed and a single thread, outputs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from toruscm import components, torus_graph
from toruscm.degree_model import DegreeDistribution, extinction_probability, sample_degree_sequence
from toruscm.experiments import (
    BoundInputs,
    ScenarioConfig,
    bound_a_n,
    bound_b_n,
    bound_c_n,
    combined_bound,
    config_with_overrides,
    run_scenario,
)

OUT_DIR_ENV = "TORUSCM_OUT"


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the CLI contract is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="toruscm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_rho = sub.add_parser("rho", parents=[], help="extinction probability of a distribution")
    p_rho.add_argument("--dist", required=True, help="JSON distribution literal")
    p_rho.add_argument("--tol", type=float, default=1e-12)

    p_gen = sub.add_parser("generate", help="generate one graph and write its edge list")
    p_gen.add_argument("--d", type=int, required=True)
    p_gen.add_argument("--k", type=int, required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--dist", required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None, help="output directory")

    p_ana = sub.add_parser("analyze", help="component summary of an edge-list file")
    p_ana.add_argument("--edges", required=True)
    p_ana.add_argument("--beta", type=float, default=10.0)

    p_bounds = sub.add_parser("bounds", help="evaluate the a_n/b_n/c_n bounds")
    p_bounds.add_argument("--m", type=int, required=True)
    p_bounds.add_argument("--k-exponent", type=float, default=2.0)
    p_bounds.add_argument("--delta", type=float, default=0.1)
    p_bounds.add_argument("--beta", type=float, default=10.0)
    p_bounds.add_argument("--p", type=float, required=True)
    p_bounds.add_argument("--epsilon", type=float, default=0.1)
    p_bounds.add_argument("--tau", type=float, default=0.1)
    p_bounds.add_argument("--C", type=float, default=1.0, dest="big_c")
    p_bounds.add_argument("--d", type=int, default=1)
    p_bounds.add_argument("--k-side", type=int, default=1)

    for name in ("giant", "counterexample", "conjecture", "percolation", "extinction", "explore"):
        p = sub.add_parser(name, help=f"run the {name} scenario")
        p.add_argument("--config", default=None, help="JSON scenario config file")
        p.add_argument("--dist", default=None, help="inline distribution literal")
        p.add_argument("--d", type=int, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--m", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--replicates", type=int, default=None)
        p.add_argument("--beta", type=float, default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory for the CSV")

    return parser


def _scenario_config(name: str, args) -> ScenarioConfig:
    if args.config:
        with open(args.config) as fh:
            obj = json.load(fh)
        obj.setdefault("scenario", name)
        if obj["scenario"] != name:
            raise ValueError(f"config is for scenario {obj['scenario']!r}, not {name!r}")
        config = ScenarioConfig.from_dict(obj)
    else:
        if args.dist is None:
            raise ValueError("either --config or --dist is required")
        config = ScenarioConfig(scenario=name, dist=DegreeDistribution.from_json(args.dist))
    return config_with_overrides(
        config,
        d=args.d,
        k=args.k,
        m=args.m,
        seed=args.seed,
        replicates=args.replicates,
        beta=args.beta,
        threads=args.threads,
    )


def _out_dir(args) -> str:
    return args.out or os.environ.get(OUT_DIR_ENV) or "."


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        if args.command == "rho":
            dist = DegreeDistribution.from_json(args.dist)
            rho = extinction_probability(dist, dist.offspring(), tol=args.tol)
            print(format(rho, ".12g"))
            return 0

        if args.command == "generate":
            dist = DegreeDistribution.from_json(args.dist)
            lattice = torus_graph.TorusLattice(args.d, args.k)
            rng = np.random.default_rng(np.random.SeedSequence((args.seed, 0)))
            seq = sample_degree_sequence(dist, lattice, args.m, rng)
            graph = torus_graph.generate(seq, lattice, rng)
            out = _out_dir(args)
            os.makedirs(out, exist_ok=True)
            path = os.path.join(out, f"edges_d{args.d}_k{args.k}_m{args.m}_s{args.seed}.csv")
            torus_graph.write_edge_list(graph, path)
            print(path)
            return 0

        if args.command == "analyze":
            with open(str(args.edges) + ".json") as fh:
                meta = json.load(fh)
            lattice = torus_graph.TorusLattice(meta["d"], meta["k"])
            graph = torus_graph.read_edge_list(args.edges, lattice, meta["m"])
            report = components.connected_components(graph)
            row = components.summary_row(graph, report, args.beta)
            print(",".join(str(k) for k in row))
            print(",".join(str(int(v) if isinstance(v, bool) else v) for v in row.values()))
            return 0

        if args.command == "bounds":
            inputs = BoundInputs(
                m=args.m,
                k_exponent=args.k_exponent,
                delta=args.delta,
                beta=args.beta,
                p=args.p,
                epsilon=args.epsilon,
                tau=args.tau,
                big_c=args.big_c,
                d=args.d,
                k_side=args.k_side,
            )
            for label, value in (
                ("a_n", bound_a_n(inputs)),
                ("b_n", bound_b_n(inputs)),
                ("c_n", bound_c_n(inputs)),
                ("combined", combined_bound(inputs)),
            ):
                print(f"{label},{value:.12g}")
            return 0

        config = _scenario_config(args.command, args)
        result = run_scenario(config, out_dir=_out_dir(args))
        for warning in result.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        print(json.dumps(result.summary, sort_keys=True))
        return 0
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
