"""Command-line entry point: ``dqdgates run|list|invariants``."""
import argparse
import sys

from .config import ConfigError, load_config, render_config
from .experiments import EXPERIMENTS, SCHEMAS, catalog, invariants_table, output_paths, resolve_gate, run_experiment
from .lindblad import IntegrationError
from .noise import RealizationError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _run(args):
    cfg = load_config(args.config, SCHEMAS)
    if args.seed is not None:
        cfg.seed = args.seed
    tables = run_experiment(cfg)
    for key, path in output_paths(cfg, tables, args.out).items():
        tables[key].write(path, cfg.json_mirror)
        print(f"wrote {path}")
    return EXIT_OK


def _list(args):
    if args.template:
        if args.template not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {args.template!r}")
        sys.stdout.write(render_config(args.template, SCHEMAS[args.template]))
    else:
        sys.stdout.write(catalog())
    return EXIT_OK


def _invariants(args):
    try:
        table = invariants_table(resolve_gate(args.gate))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    g1, g2, g3, _, _, pe, edge = table.rows[0]
    print(f"G1 = {g1:.12g}\nG2 = {g2:.12g}\nG3 = {g3:.12g}")
    print(f"perfect_entangler = {'true' if pe else 'false'}")
    if edge:
        print("on_boundary = true")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="dqdgates", description="Charge-qubit gate simulations.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment from a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--seed", type=int)
    run.add_argument("--out")
    run.set_defaults(func=_run)
    ls = sub.add_parser("list", help="list experiments and their defaults")
    ls.add_argument("--template", metavar="NAME", help="print a default config for NAME")
    ls.set_defaults(func=_list)
    inv = sub.add_parser("invariants", help="Makhlin invariants of a two-qubit gate")
    inv.add_argument("--gate", required=True, help="built-in name or matrix file")
    inv.set_defaults(func=_invariants)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RealizationError as exc:
        print(f"numerical failure: {exc} (master_seed={exc.master_seed}, "
              f"realization={exc.index})", file=sys.stderr)
        return EXIT_NUMERIC
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
