"""Command-line front end: ``leadtree {generate,cluster,hierarchy,bench}``.

Exit status is 0 on success, 2 for usage or parameter errors, 3 for
unparseable input, 4 for structural errors and 5 for I/O failures.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import bench, datasets
from ._errors import InputError, LeadTreeError, ParameterError, StructuralError
from .density import read_distance_matrix_csv
from .hierarchy import adjusted_rand_index, build_hierarchy, check_refinement, write_hierarchy
from .ltree import split, to_dot, write_parents_csv, forest_labels
from .peaks import select_centers, write_profile_csv
from .pipeline import fit

EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_STRUCTURE = 4
EXIT_IO = 5

DEFAULT_SEED = 0
DEFAULT_DC_PERCENT = 2.0


class _Usage(Exception):
    pass


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _add_common(p):
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    p.add_argument("--kernel", choices=("gaussian", "cutoff"), default="gaussian")
    p.add_argument("--dc-percent", type=float, default=DEFAULT_DC_PERCENT)


def _add_input(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="points CSV (or UCI ecoli.data with --input-format ecoli)")
    src.add_argument("--distances", help="N x N distance matrix CSV")
    p.add_argument("--input-format", choices=("csv", "ecoli"), default="csv")
    p.add_argument("--no-header", dest="header", action="store_false",
                   help="points CSV has no header row")


def make_parser():
    parser = argparse.ArgumentParser(prog="leadtree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic dataset")
    g.add_argument("--kind", required=True, choices=sorted(datasets.KIND_ALIASES))
    g.add_argument("--n-points", type=int, default=None)
    g.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    g.add_argument("--out", required=True)

    c = sub.add_parser("cluster", help="flat clustering with m centers")
    _add_input(c)
    _add_common(c)
    c.add_argument("--centers", type=int, required=True, metavar="M")
    c.add_argument("--out", required=True, help="labels CSV")
    c.add_argument("--parents", help="also write index,parent,depth,label CSV")
    c.add_argument("--dot", help="also write a Graphviz DOT file of the forest")
    c.add_argument("--profile", help="also write index,rho,delta,nn,gamma CSV")

    h = sub.add_parser("hierarchy", help="nested clusterings from one leading tree")
    _add_input(h)
    _add_common(h)
    h.add_argument("--layers", type=_int_list, required=True)
    h.add_argument("--out-dir", required=True)

    b = sub.add_parser("bench", help="time assign/construct/split")
    b.add_argument("--datasets", default="5spherical,5spiral",
                   help="comma list from 5spherical, 5spiral, ecoli")
    b.add_argument("--ecoli", help="path to ecoli.data (needed for 'ecoli')")
    b.add_argument("--synthetic", type=_int_list, default=[],
                   help="extra Gaussian-blob datasets of these sizes")
    b.add_argument("--centers", type=int, default=8, help="m for synthetic datasets")
    b.add_argument("--repeats", type=int, default=bench.DEFAULT_REPEATS)
    b.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    b.add_argument("--kernel", choices=("gaussian", "cutoff"), default="gaussian")
    b.add_argument("--dc-percent", type=float, default=DEFAULT_DC_PERCENT)
    b.add_argument("--with-labeling", action="store_true",
                   help="also time split followed by label extraction")
    b.add_argument("--out", required=True, help="report CSV; a .txt summary goes next to it")
    return parser


def _load(args):
    if args.distances:
        return read_distance_matrix_csv(args.distances), None
    if args.input_format == "ecoli":
        ds = datasets.load_ecoli(args.input)
    else:
        ds = datasets.read_points_csv(args.input, header=args.header)
    return ds, ds.labels


def _config(args):
    return {k: v for k, v in vars(args).items() if k != "func"}


def cmd_generate(args):
    spec = datasets.GeneratorSpec(args.kind, n_points=args.n_points, seed=args.seed)
    ds = datasets.generate(spec)
    datasets.write_points_csv(args.out, ds)
    datasets.write_manifest(args.out + ".manifest.json", command="generate", spec=spec.to_dict(),
                            seed=args.seed, n_points=ds.n, config=_config(args))
    print(f"wrote {ds.n} points to {args.out}")


def cmd_cluster(args):
    data, truth = _load(args)
    f = fit(data, kernel=args.kernel, percent=args.dc_percent)
    forest = split(f.tree, select_centers(f.profile.gamma_order, args.centers), mode="prefix_fast")
    labels = forest_labels(forest)
    with open(args.out, "w") as fh:
        fh.write("index,label\n")
        fh.writelines(f"{i + 1},{int(lab)}\n" for i, lab in enumerate(labels))
    if args.parents:
        write_parents_csv(args.parents, forest)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(forest))
    if args.profile:
        write_profile_csv(args.profile, f.profile)
    info = {"command": "cluster", "m": args.centers, "kernel": args.kernel, "dc": f.dc,
            "seed": args.seed, "n_points": f.tree.n, "config": _config(args)}
    if truth is not None:
        info["ari_vs_ground_truth"] = adjusted_rand_index(truth, labels)
        print(f"ARI vs ground truth: {info['ari_vs_ground_truth']:.4f}")
    datasets.write_manifest(args.out + ".manifest.json", **info)
    print(f"wrote {labels.size} labels in {args.centers} clusters to {args.out}")


def cmd_hierarchy(args):
    layers = args.layers
    if any(b <= a for a, b in zip(layers, layers[1:])):
        raise _Usage(f"--layers must be strictly ascending, got {layers}")
    data, _ = _load(args)
    f = fit(data, kernel=args.kernel, percent=args.dc_percent)
    h = build_hierarchy(f.tree, layers)
    write_hierarchy(args.out_dir, h, kernel=args.kernel, dc=f.dc, seed=args.seed,
                    dc_percent=args.dc_percent, config=_config(args))
    ok = check_refinement(h)
    print(f"wrote {len(h)} layers to {args.out_dir}; refinement={'true' if ok else 'false'}")
    if not ok:
        raise StructuralError(f"layer {ok.layer} does not refine its predecessor; witness {ok.pair}")


def cmd_bench(args):
    if args.repeats < bench.MIN_REPEATS:
        raise ParameterError(f"--repeats must be at least {bench.MIN_REPEATS}")
    named = {"5spherical": ("five_spherical", (2, 4, 5)),
             "5spiral": ("five_spiral", (2, 3, 5)),
             "ecoli": (None, (2, 4, 8))}
    data, counts = {}, {}
    for name in [d.strip() for d in args.datasets.split(",") if d.strip()]:
        if name not in named:
            raise _Usage(f"unknown dataset {name!r}; expected one of {sorted(named)}")
        kind, layers = named[name]
        if kind is None:
            if not args.ecoli:
                raise _Usage("dataset 'ecoli' needs --ecoli PATH")
            data[name] = datasets.load_ecoli(args.ecoli)
        else:
            data[name] = datasets.generate(datasets.GeneratorSpec(kind, seed=args.seed))
        counts[name] = layers
    for n in args.synthetic:
        name = f"blobs{n}"
        data[name] = datasets.gen_blobs(n, k=args.centers, seed=args.seed)
        counts[name] = (args.centers,)
    stages = bench.STAGES + (("split_labels",) if args.with_labeling else ())
    report = bench.run_benchmark(data, counts, repeats=args.repeats, kernel=args.kernel,
                                 percent=args.dc_percent, seed=args.seed, stages=stages)
    bench.write_report_csv(args.out, report)
    summary = os.path.splitext(args.out)[0] + ".txt"
    with open(summary, "w") as fh:
        fh.write(report.text())
    datasets.write_manifest(args.out + ".manifest.json", command="bench", config=_config(args))
    sys.stdout.write(report.text())


COMMANDS = {"generate": cmd_generate, "cluster": cmd_cluster,
            "hierarchy": cmd_hierarchy, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except (_Usage, ParameterError) as exc:
        print(f"leadtree {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"leadtree {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except StructuralError as exc:
        print(f"leadtree {args.command}: structural error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except OSError as exc:
        print(f"leadtree {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LeadTreeError as exc:
        print(f"leadtree {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
