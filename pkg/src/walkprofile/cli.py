"""Command-line interface.

Subcommands: generate, profile, distance, matrix, cut-distance, experiment.
Exit codes: 0 success, 1 usage or validation error, 2 data or I/O error.
All output is deterministic for fixed flags and seeds.
"""

from __future__ import annotations

import argparse
import json
import sys

from .distance import (
    DistanceOptions,
    cut_distance_bruteforce,
    distance_matrix,
    profile_distance,
)
from .experiment import (
    ClusterSpec,
    ExperimentConfig,
    atomic_write_text,
    generate_population,
    run_experiment,
    write_experiment_outputs,
)
from .graph import (
    Graph,
    GraphDataError,
    generate_er_gnp,
    read_edge_list,
    write_edge_list,
)
from .profiles import DEFAULT_DEPTH, GraphProfile, vertex_profile

__all__ = ["entry_point", "main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; this tool reserves 2 for
    data errors, so flag problems are remapped to exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(value: float) -> str:
    return f"{value:.12f}"


def _load_graph(path: str) -> Graph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise GraphDataError(f"{path}: not a UTF-8 text file ({exc})") from None
    try:
        return read_edge_list(text)
    except GraphDataError as exc:
        raise GraphDataError(f"{path}: {exc}") from None


def _parse_cluster(text: str) -> ClusterSpec:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected P,COUNT,N (three comma-separated values), got {text!r}"
        )
    try:
        p = float(parts[0])
        count = int(parts[1])
        n = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected float,int,int in {text!r}"
        ) from None
    try:
        return ClusterSpec(p=p, count=count, n=n)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_distance_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--k", type=int, default=DEFAULT_DEPTH,
                     help="profile depth (default 4)")
    sub.add_argument("--mode", choices=["scalar", "vector"], default="scalar",
                     help="compare scalar summaries or full profile vectors")
    sub.add_argument("--norm", choices=["l1", "l2", "linf"], default="l1",
                     help="vector-mode norm (default l1)")
    sub.add_argument("--normalize", action="store_true",
                     help="scale averaged counts by 1/(n-1) before comparing")


def _opts_from_args(args: argparse.Namespace) -> DistanceOptions:
    return DistanceOptions(
        mode=args.mode, norm=args.norm, normalize=args.normalize, depth=args.k
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="walkprofile",
        description="Graph comparison via walk-neighborhood count profiles.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="sample a seeded G(n, p) graph")
    gen.add_argument("out", help="edge-list file to write")
    gen.add_argument("--nodes", type=int, required=True, help="vertex count")
    gen.add_argument("--prob", type=float, required=True,
                     help="edge probability in [0, 1]")
    gen.add_argument("--seed", type=int, required=True, help="RNG seed")
    gen.set_defaults(func=_cmd_generate)

    prof = subs.add_parser("profile", help="print a vertex or graph profile")
    prof.add_argument("graph", help="edge-list file")
    prof.add_argument("--vertex", type=int, default=None,
                      help="profile this vertex; omit for the graph average")
    prof.add_argument("--k", type=int, default=DEFAULT_DEPTH,
                      help="profile depth (default 4)")
    prof.add_argument("--format", choices=["json", "csv"], default="json")
    prof.set_defaults(func=_cmd_profile)

    dist = subs.add_parser("distance", help="profile distance of two graphs")
    dist.add_argument("graph_a", help="first edge-list file")
    dist.add_argument("graph_b", help="second edge-list file")
    _add_distance_flags(dist)
    dist.set_defaults(func=_cmd_distance)

    mat = subs.add_parser("matrix", help="pairwise profile distances")
    mat.add_argument("graphs", nargs="+", help="edge-list files")
    _add_distance_flags(mat)
    mat.add_argument("--format", choices=["json", "csv"], default="json")
    mat.add_argument("-o", "--out", default=None,
                     help="write here instead of standard output")
    mat.set_defaults(func=_cmd_matrix)

    cut = subs.add_parser("cut-distance",
                          help="exact cut distance by subset enumeration")
    cut.add_argument("graph_a", help="first edge-list file")
    cut.add_argument("graph_b", help="second edge-list file")
    cut.add_argument("--force", action="store_true",
                     help="allow n > 20 despite the exponential cost")
    cut.set_defaults(func=_cmd_cut_distance)

    exp = subs.add_parser("experiment",
                          help="run the clustered random-graph experiment")
    exp.add_argument("out_dir", help="directory for result files")
    exp.add_argument("--config", default=None,
                     help="experiment config JSON (excludes the flags below)")
    exp.add_argument("--cluster", action="append", type=_parse_cluster,
                     default=None, metavar="P,COUNT,N",
                     help="add a cluster; repeatable")
    exp.add_argument("--k", type=int, default=None, help="profile depth")
    exp.add_argument("--seed", type=int, default=None, help="master seed")
    exp.add_argument("--mode", choices=["scalar", "vector"], default=None)
    exp.add_argument("--norm", choices=["l1", "l2", "linf"], default=None)
    exp.add_argument("--normalize", action="store_const", const=True,
                     default=None)
    exp.add_argument("--no-figures", action="store_true",
                     help="write CSV/JSON only, skip PNG rendering")
    exp.add_argument("--profile-graph", type=int, default=0,
                     help="population index for the plot-data graph")
    exp.add_argument("--profile-vertex", type=int, default=0,
                     help="vertex for the single-vertex plot data")
    exp.add_argument("--first-vertices", type=int, default=3,
                     help="vertex count for the grouped plot data")
    exp.set_defaults(func=_cmd_experiment)

    return parser


def _cmd_generate(args: argparse.Namespace) -> int:
    g = generate_er_gnp(args.nodes, args.prob, args.seed)
    atomic_write_text(args.out, write_edge_list(g))
    return EXIT_OK


def _cmd_profile(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    ks = list(range(1, args.k + 1))
    if args.vertex is not None:
        counts = list(vertex_profile(g, args.vertex, args.k))
        if args.format == "json":
            out = {"n": g.n, "K": args.k, "k": ks, "counts": counts}
            print(json.dumps(out, indent=2))
        else:
            print("k,count")
            for k, c in zip(ks, counts):
                print(f"{k},{c}")
    else:
        profile = GraphProfile.of(g, args.k)
        if args.format == "json":
            out = {"n": g.n, "K": args.k, "k": ks, "avg_counts": list(profile.avg)}
            print(json.dumps(out, indent=2))
        else:
            print("k,avg_count")
            for k, c in zip(ks, profile.avg):
                print(f"{k},{_fmt(c)}")
    return EXIT_OK


def _cmd_distance(args: argparse.Namespace) -> int:
    g1 = _load_graph(args.graph_a)
    g2 = _load_graph(args.graph_b)
    print(_fmt(profile_distance(g1, g2, _opts_from_args(args))))
    return EXIT_OK


def _cmd_matrix(args: argparse.Namespace) -> int:
    graphs = [_load_graph(path) for path in args.graphs]
    matrix = distance_matrix(graphs, _opts_from_args(args), labels=args.graphs)
    if args.format == "json":
        text = json.dumps(matrix.to_json_dict(), indent=2) + "\n"
    else:
        text = matrix.to_csv()
    if args.out is None:
        sys.stdout.write(text)
    else:
        atomic_write_text(args.out, text)
    return EXIT_OK


def _cmd_cut_distance(args: argparse.Namespace) -> int:
    g1 = _load_graph(args.graph_a)
    g2 = _load_graph(args.graph_b)
    print(_fmt(cut_distance_bruteforce(g1, g2, force=args.force)))
    return EXIT_OK


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    mirrored = {
        "--cluster": args.cluster,
        "--k": args.k,
        "--seed": args.seed,
        "--mode": args.mode,
        "--norm": args.norm,
        "--normalize": args.normalize,
    }
    given = [flag for flag, value in mirrored.items() if value is not None]
    if args.config is not None:
        if given:
            raise ValueError(
                "--config excludes the mirrored flags; drop " + ", ".join(given)
            )
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        return ExperimentConfig.from_json_dict(data)
    if not args.cluster:
        raise ValueError("need --config or at least one --cluster")
    if args.seed is None:
        raise ValueError("need --seed when configuring by flags")
    return ExperimentConfig(
        clusters=tuple(args.cluster),
        seed=args.seed,
        depth=args.k if args.k is not None else DEFAULT_DEPTH,
        mode=args.mode if args.mode is not None else "scalar",
        norm=args.norm if args.norm is not None else "l1",
        normalize=bool(args.normalize),
    )


def _cmd_experiment(args: argparse.Namespace) -> int:
    config = _experiment_config(args)
    population = generate_population(config)
    result = run_experiment(config, population)
    write_experiment_outputs(
        result,
        population,
        args.out_dir,
        include_figures=not args.no_figures,
        profile_graph=args.profile_graph,
        profile_vertex=args.profile_vertex,
        first_vertices=args.first_vertices,
    )
    print(f"overall_accuracy {_fmt(result.overall_accuracy)}")
    for i, acc in enumerate(result.per_cluster_accuracy):
        print(f"cluster_{i}_accuracy {_fmt(acc)}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except GraphDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entry_point() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry_point()
