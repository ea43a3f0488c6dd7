"""Command-line interface.

Subcommands: ``taxonomy-sim`` (pairwise metric queries), ``train-lsa``,
``train-sgns``, ``features`` (pair-feature CSV dump), ``run`` (full
experiment from a config file), and ``report`` (re-render a saved JSON
report). Exit codes: 0 success, 1 usage error, 2 data/parse error,
3 numeric failure. ``WORDSIM_SEED`` overrides the config master seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import taxonomy as tx
from .errors import MissingResourceError, NumericError, WordsimError
from .corpus import read_documents
from .harness import (
    ExperimentConfig,
    emit_report,
    load_simlex,
    report_from_dict,
    run_experiment,
)
from .lexicons import load_counts_csv
from .qna import pair_features
from .registry import build_registry, spec_from_dict
from .resources import FeatureProviders, load_config_file, load_resources
from .sgns import SgnsConfig, train_sgns
from .vsm import build_dtm, save_vec_file, train_lsa


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _build_parser():
    parser = _Parser(prog="wordsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("taxonomy-sim", help="score a word pair with a taxonomy metric")
    p.add_argument("--taxonomy", required=True)
    p.add_argument("--format", choices=("tsv", "wndb"), default="tsv")
    p.add_argument("--metric", choices=tx.METRICS, required=True)
    p.add_argument("--pos", choices=("n", "v"), default="n")
    p.add_argument("--counts", help="lemma-count CSV (needed for res/jcn/lin)")
    p.add_argument("word1")
    p.add_argument("word2")

    p = sub.add_parser("train-lsa", help="train LSA vectors from a text corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unit", choices=("blocks", "file", "lines"), default="blocks")
    p.add_argument("--out", required=True)

    p = sub.add_parser("train-sgns", help="train skip-gram vectors from a text corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--learning-rate", type=float, default=0.025)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--mode", choices=("skipgram", "cbow"), default="skipgram")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--unit", choices=("blocks", "file", "lines"), default="blocks")
    p.add_argument("--out", required=True)

    p = sub.add_parser("features", help="dump the pair-feature table as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("run", help="run the cross-validated experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--formats", default="csv,json")
    p.add_argument("--scatter", type=int, help="emit predicted/observed for a model id")

    p = sub.add_parser("report", help="re-render a saved JSON report")
    p.add_argument("--report", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--formats", default="csv")
    p.add_argument("--scatter", type=int)
    return parser


def _cmd_taxonomy_sim(args):
    taxonomy = tx.load_taxonomy(args.taxonomy, format=args.format)
    ic = None
    if args.counts:
        ic = tx.compute_ic(taxonomy, load_counts_csv(args.counts))
    elif args.metric in tx.IC_METRICS:
        raise MissingResourceError(
            f"metric {args.metric!r} needs --counts for information content"
        )
    score = tx.word_similarity(
        args.metric, taxonomy, args.word1, args.word2, args.pos, ic=ic
    )
    print(repr(score.value))
    return 0


def _cmd_train_lsa(args):
    docs = read_documents(args.corpus, unit=args.unit)
    dtm = build_dtm(docs, min_count=args.min_count)
    space = train_lsa(dtm, k=args.dim, seed=args.seed)
    save_vec_file(space, args.out)
    print(f"wrote {len(space.vectors)} vectors of dim {space.dim} to {args.out}")
    return 0


def _cmd_train_sgns(args):
    docs = read_documents(args.corpus, unit=args.unit)
    config = SgnsConfig(
        dim=args.dim,
        seed=args.seed,
        window=args.window,
        negatives=args.negatives,
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        min_count=args.min_count,
        mode=args.mode,
    )
    space = train_sgns(docs, config)
    save_vec_file(space, args.out)
    print(f"wrote {len(space.vectors)} vectors of dim {space.dim} to {args.out}")
    return 0


def _load_run_inputs(config_path, env):
    doc = load_config_file(config_path)
    base_dir = os.path.dirname(os.path.abspath(config_path))
    dataset_path = doc.get("dataset")
    if not dataset_path:
        raise WordsimError("config is missing the 'dataset' path")
    if not os.path.isabs(dataset_path):
        dataset_path = os.path.join(base_dir, dataset_path)
    dataset = load_simlex(dataset_path)

    bundle = load_resources(doc.get("resources", {}), base_dir=base_dir)
    providers = FeatureProviders(bundle)

    exp_kwargs = dict(doc.get("experiment", {}))
    seed_override = env.get("WORDSIM_SEED")
    if seed_override is not None:
        try:
            exp_kwargs["master_seed"] = int(seed_override)
        except ValueError:
            raise WordsimError(
                f"WORDSIM_SEED must be an integer, got {seed_override!r}"
            ) from None
    config = ExperimentConfig(**exp_kwargs)

    available = bundle.available()
    selection = doc.get("models", "all")
    registry = build_registry(available)
    if selection == "all":
        specs = registry
    elif isinstance(selection, list) and all(
        isinstance(x, int) for x in selection
    ):
        by_id = {s.id: s for s in registry}
        unknown = [x for x in selection if x not in by_id]
        if unknown:
            raise WordsimError(f"unknown model ids in config: {unknown}")
        specs = [by_id[x] for x in selection]
    elif isinstance(selection, list):
        specs = [spec_from_dict(entry, available) for entry in selection]
    else:
        raise WordsimError("config 'models' must be 'all', id list, or spec list")
    return dataset, specs, config, providers


def _cmd_features(args, env):
    dataset, specs, _config, providers = _load_run_inputs(args.config, env)
    columns = list(
        dict.fromkeys(f for spec in specs for f in spec.features)
    )
    pos_tag = {"N": "n", "V": "v"}
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["word1", "word2", "pos", "rating", *columns])
        for pair in dataset.pairs:
            scorers = providers.pair_scorers(pos_tag[pair.pos])
            vec = pair_features(
                pair.word1,
                pair.word2,
                columns,
                providers.extractor.features,
                pair_scores={k: v for k, v in scorers.items() if k in columns},
            )
            row = [pair.word1, pair.word2, pair.pos, repr(pair.rating)]
            for name in columns:
                row.append(repr(vec.values[name]) if vec.mask[name] else "")
            writer.writerow(row)
    print(f"wrote {len(dataset.pairs)} rows x {len(columns)} features to {args.out}")
    return 0


def _cmd_run(args, env):
    dataset, specs, config, providers = _load_run_inputs(args.config, env)
    report = run_experiment(dataset, specs, config, providers)
    formats = [f for f in args.formats.split(",") if f]
    written = emit_report(report, formats, args.out_dir, scatter=args.scatter)
    for sr in report.specs:
        if sr.status == "skipped":
            print(f"model {sr.spec_id:>2} {sr.name}: skipped ({sr.skip_reason})")
            continue
        parts = ", ".join(
            f"{r.regressor} {r.r2_train_mean:.3f}/{r.r2_test_mean:.3f}"
            for r in sr.results
        )
        print(f"model {sr.spec_id:>2} {sr.name}: {parts}")
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_report(args):
    with open(args.report, encoding="utf-8") as handle:
        report = report_from_dict(json.load(handle))
    formats = [f for f in args.formats.split(",") if f]
    written = emit_report(report, formats, args.out_dir, scatter=args.scatter)
    for path in written:
        print(f"wrote {path}")
    return 0


def main(argv=None, env=None):
    env = os.environ if env is None else env
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "taxonomy-sim":
            return _cmd_taxonomy_sim(args)
        if args.command == "train-lsa":
            return _cmd_train_lsa(args)
        if args.command == "train-sgns":
            return _cmd_train_sgns(args)
        if args.command == "features":
            return _cmd_features(args, env)
        if args.command == "run":
            return _cmd_run(args, env)
        if args.command == "report":
            return _cmd_report(args)
        parser.error(f"unknown command {args.command!r}")
    except NumericError as exc:
        print(f"wordsim: numeric failure: {exc}", file=sys.stderr)
        return 3
    except WordsimError as exc:
        print(f"wordsim: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"wordsim: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
