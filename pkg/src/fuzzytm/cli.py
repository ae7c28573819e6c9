"""Command-line entry point: booleanize, train, eval, predict, bench, suggest.

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import booleanize as bz
from .dataset_io import BitDataset, load_idx, load_imdb_dir, read_container, write_container
from .heuristics import suggest_S, suggest_T
from .inference import pack_model, predict_batch
from .model import MODE_BINARY, Hyperparameters, load_model, new_model, save_model
from .presets import PRESETS, get_preset
from .training import FeedbackConfig, fit


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> _Parser:
    p = _Parser(prog="fuzzytm", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_common_hyper(sp):
        sp.add_argument("--preset", choices=sorted(PRESETS))
        sp.add_argument("--mode", choices=["binary", "multiclass"])
        sp.add_argument("--classes", type=int)
        sp.add_argument("--clauses", type=int, help="clauses per class")
        sp.add_argument("-T", "--threshold", type=int, dest="T")
        sp.add_argument("-S", "--specificity", type=float, dest="S")
        sp.add_argument("-L", "--max-literals", type=int, dest="L")
        sp.add_argument("--lf", type=int, help="max literal failures")

    sp = sub.add_parser("booleanize", help="fit a booleanizer and emit packed containers")
    sp.add_argument("--kind", choices=["text", "image"], required=True)
    sp.add_argument("--imdb-dir", help="aclImdb-style directory (text)")
    sp.add_argument("--train-images")
    sp.add_argument("--train-labels")
    sp.add_argument("--test-images")
    sp.add_argument("--test-labels")
    sp.add_argument("--vocab", type=int, default=40000)
    sp.add_argument("--max-ngram", type=int, default=4)
    sp.add_argument("--features", type=int, default=12800)
    sp.add_argument("--bits-per-map", type=int, default=8)
    sp.add_argument("--fit-limit", type=int,
                    help="fit thresholds/vocabulary on at most this many samples")
    sp.add_argument("--out-dir", required=True)

    sp = sub.add_parser("train", help="train a model on a packed container")
    add_common_hyper(sp)
    sp.add_argument("--data", required=True, help="training container")
    sp.add_argument("--eval", dest="eval_data", help="test container")
    sp.add_argument("--epochs", type=int)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--model", required=True, help="output model path")
    sp.add_argument("--log", help="per-epoch CSV log path")
    sp.add_argument("--report", help="report directory (CSV + figure)")
    sp.add_argument("--booleanizer", help="booleanizer spec JSON to embed")
    sp.add_argument("--ia-false-action", choices=["decrement", "noop"],
                    default="decrement")
    sp.add_argument("--progress", action="store_true")

    sp = sub.add_parser("eval", help="accuracy of a model on a container")
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("predict", help="write predicted labels to a file")
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--threads", type=int, default=1)

    sp = sub.add_parser("bench", help="batch-inference throughput, one CSV line")
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--reps", type=int, default=3)

    sp = sub.add_parser("suggest", help="suggest hyperparameters")
    sp.add_argument("--mode", choices=["binary", "multiclass"], required=True)
    sp.add_argument("--clauses", type=int, required=True)
    sp.add_argument("--lf", type=int, required=True)
    sp.add_argument("--s-tm", type=float,
                    help="tuned standard-TM specificity to square")
    sp.add_argument("--chosen-t", type=int,
                    help="report whether this T falls in the suggested range")
    return p


def _resolve_train_config(args):
    if args.preset:
        preset = get_preset(args.preset)
        hyper = preset.hyper
        mode, classes, epochs = preset.mode, preset.classes, preset.epochs
    else:
        required = dict(mode=args.mode, classes=args.classes, clauses=args.clauses,
                        T=args.T, S=args.S, L=args.L, lf=args.lf)
        missing = [k for k, v in required.items() if v is None]
        if missing:
            raise UsageError(
                "without --preset, these flags are required: " + ", ".join(missing)
            )
        hyper = Hyperparameters(T=args.T, S=args.S, L=args.L, LF=args.lf,
                                clauses_per_class=args.clauses)
        mode, classes, epochs = args.mode, args.classes, None
    # explicit flags override preset values
    if args.preset:
        overrides = dict(T=args.T, S=args.S, L=args.L, LF=args.lf,
                         clauses_per_class=args.clauses)
        hyper = Hyperparameters(**{
            k: (v if v is not None else getattr(hyper, k))
            for k, v in overrides.items()
        })
        if args.mode:
            mode = args.mode
        if args.classes:
            classes = args.classes
    if args.epochs is not None:
        epochs = args.epochs
    if epochs is None:
        raise UsageError("--epochs is required without a preset")
    return mode, classes, hyper, epochs


def _cmd_booleanize(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    import json
    if args.kind == "text":
        if not args.imdb_dir:
            raise UsageError("--imdb-dir is required for --kind text")
        splits = load_imdb_dir(args.imdb_dir)
        train_docs, train_labels = splits["train"]
        fit_docs = train_docs[:args.fit_limit] if args.fit_limit else train_docs
        spec = bz.TextBooleanizer(args.vocab, args.max_ngram, args.features).fit(fit_docs)
        for split in ("train", "test"):
            docs, labels = splits[split]
            ds = BitDataset.from_bit_samples(
                [spec.transform(d) for d in docs], labels, classes=2)
            write_container(ds, out_dir / f"{split}.bits")
    else:
        needed = [args.train_images, args.train_labels, args.test_images,
                  args.test_labels]
        if any(v is None for v in needed):
            raise UsageError("--kind image requires --train-images, --train-labels, "
                             "--test-images, --test-labels")
        train_imgs, train_labels = load_idx(args.train_images, args.train_labels)
        test_imgs, test_labels = load_idx(args.test_images, args.test_labels)
        fit_imgs = train_imgs[:args.fit_limit] if args.fit_limit else train_imgs
        spec = bz.ImageBooleanizer(bits_per_map=args.bits_per_map).fit(fit_imgs)
        classes = int(max(train_labels.max(), test_labels.max())) + 1
        for split, (imgs, labels) in (("train", (train_imgs, train_labels)),
                                      ("test", (test_imgs, test_labels))):
            ds = BitDataset.from_bit_samples(
                [spec.transform(im) for im in imgs], labels, classes=classes)
            write_container(ds, out_dir / f"{split}.bits")
    with open(out_dir / "booleanizer.json", "w") as f:
        json.dump(spec.to_dict(), f)
    print(f"wrote {out_dir}/train.bits, {out_dir}/test.bits, "
          f"{out_dir}/booleanizer.json (F={spec.feature_count})")
    return 0


def _cmd_train(args) -> int:
    import json
    mode, classes, hyper, epochs = _resolve_train_config(args)
    train_ds = read_container(args.data)
    eval_ds = read_container(args.eval_data) if args.eval_data else None
    model = new_model(mode, train_ds.feature_count, classes, hyper, seed=args.seed)
    if args.booleanizer:
        with open(args.booleanizer) as f:
            model.booleanizer_descriptor = json.load(f)
    config = FeedbackConfig(type_ia_false_action=args.ia_false_action,
                            rng_seed=args.seed)
    log_stream = open(args.log, "w") if args.log else None
    try:
        if log_stream:
            from .report import CSV_HEADER
            log_stream.write(CSV_HEADER + "\n")
        model, reports = fit(model, train_ds, epochs, config,
                             eval_dataset=eval_ds, log_stream=log_stream,
                             progress=args.progress)
    finally:
        if log_stream:
            log_stream.close()
    save_model(model, args.model)
    if args.report:
        from .report import render_report
        paths = render_report(reports, args.report)
        print(f"report: {paths['csv']} {paths['figure']}")
    if reports:
        last = reports[-1]
        best = max((r.test_accuracy or 0.0) for r in reports)
        print(f"trained {epochs} epochs; final train_acc={last.train_accuracy:.4f}"
              + (f" peak test_acc={best:.4f}" if eval_ds is not None else ""))
    else:
        print("trained 0 epochs; wrote untrained model")
    return 0


def _cmd_eval(args) -> int:
    model = load_model(args.model)
    ds = read_container(args.data)
    labels, _ = predict_batch(pack_model(model), ds, threads=args.threads,
                              repetitions=1, warmup=0)
    acc = float(np.mean(labels == ds.labels))
    print(f"accuracy={acc:.6f} n={ds.n_samples}")
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    ds = read_container(args.data)
    labels, _ = predict_batch(pack_model(model), ds, threads=args.threads,
                              repetitions=1, warmup=0)
    with open(args.out, "w") as f:
        for lab in labels:
            f.write(f"{int(lab)}\n")
    print(f"wrote {len(labels)} labels to {args.out}")
    return 0


def _cmd_bench(args) -> int:
    model = load_model(args.model)
    ds = read_container(args.data)
    _, report = predict_batch(pack_model(model), ds, threads=args.threads,
                              repetitions=args.reps, warmup=1)
    print("preds_per_s,bytes_per_s,batch_size,threads")
    print(report.csv_line())
    return 0


def _cmd_suggest(args) -> int:
    s = suggest_T(args.clauses, args.lf, args.mode, chosen_T=args.chosen_t)
    print(f"T={s.T} range=[{s.T_range[0]},{s.T_range[1]}]")
    if s.notes:
        print(f"note: {s.notes}")
    if args.s_tm is not None:
        print(f"S={suggest_S(args.s_tm):g}")
    return 0


_COMMANDS = {
    "booleanize": _cmd_booleanize,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "predict": _cmd_predict,
    "bench": _cmd_bench,
    "suggest": _cmd_suggest,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
