"""Command-line entry points: featurize, build-vocab, embed, train,
cross-validate, report.

Runs are described by a flat ``key = value`` config file with section
prefixes (``dataset.path``, ``labelmap.<raw>``, ``model.kind``, ...);
``--seed`` and ``--out-dir`` flags override the file.  All validation
errors are collected and printed before any computation starts.

Exit codes: 0 success, 1 usage/config error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from postsift import bow, embeddings, evaluate, features, hybrid, models
from postsift.corpus import (
    ColumnSchema,
    Dataset,
    DatasetError,
    LabelMap,
    load_dataset,
    make_folds,
)
from postsift.pipeline import (
    FEATURE_SETS,
    HYBRID_KIND,
    Artifacts,
    BowOptions,
    Pipeline,
)
from postsift.textproc import (
    Lexicon,
    load_interjection_lexicon,
    load_slang_lexicon,
    normalize,
    tokenize,
)

USAGE_ERROR = 1
RUNTIME_ERROR = 2

_MODEL_KINDS = models.KINDS + (HYBRID_KIND,)

_MODEL_HYPER_TYPES = {
    "alpha": float, "max_iter": int, "tol": float,
    "reg": float, "lr0": float,
    "max_depth": int, "min_samples_split": int,
    "n_trees": int, "bootstrap": lambda s: s.lower() in ("1", "true", "yes"),
    "max_features": str,
    "var_smoothing": float,
    "hidden": int, "lr": float, "max_epochs": int, "batch_size": int,
    "plateau_tol": float, "plateau_epochs": int,
}


def parse_config_file(path: Path) -> dict[str, str]:
    """Flat key=value lines; '#' starts a comment; later keys win."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            key, sep, value = stripped.partition("=")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            values[key.strip()] = value.strip()
    return values


@dataclass
class RunConfig:
    """Validated run description built from file values plus flag overrides."""

    dataset_path: Path
    schema: ColumnSchema
    label_map: LabelMap
    dataset_name: str
    feature_set: str
    model_kind: str
    model_hyper: dict
    seed: int
    cv_k: int
    cv_stratified: bool
    out_dir: Path
    threads: int
    slang_path: Path | None
    interj_path: Path | None
    word_vectors_path: Path | None
    sentence_vectors_path: Path | None
    bow_options: BowOptions
    hybrid_p: int
    hybrid_q: int
    hybrid_activation: str
    train_settings: hybrid.TrainSettings


def _build_config(raw: dict[str, str], args: argparse.Namespace,
                  errors: list[str]) -> RunConfig | None:
    def get(key: str, default: str | None = None) -> str | None:
        return raw.get(key, default)

    def get_int(key: str, default: int) -> int:
        text = raw.get(key)
        if text is None:
            return default
        try:
            return int(text)
        except ValueError:
            errors.append(f"config {key} must be an integer, got {text!r}")
            return default

    def get_float(key: str, default: float) -> float:
        text = raw.get(key)
        if text is None:
            return default
        try:
            return float(text)
        except ValueError:
            errors.append(f"config {key} must be a number, got {text!r}")
            return default

    def get_bool(key: str, default: bool) -> bool:
        text = raw.get(key)
        if text is None:
            return default
        if text.lower() in ("1", "true", "yes", "on"):
            return True
        if text.lower() in ("0", "false", "no", "off"):
            return False
        errors.append(f"config {key} must be a boolean, got {text!r}")
        return default

    dataset_path = get("dataset.path")
    if not dataset_path:
        errors.append("config dataset.path is required")
    delim_name = get("dataset.delimiter", "tab")
    delimiter = {"tab": "\t", "comma": ","}.get(delim_name)
    if delimiter is None:
        errors.append(f"dataset.delimiter must be 'tab' or 'comma', got {delim_name!r}")
        delimiter = "\t"
    schema_kwargs = dict(
        id=get("dataset.id_column", "id"),
        text=get("dataset.text_column", "text"),
        label=get("dataset.label_column", "label"),
        delimiter=delimiter)
    user_cols = get("dataset.user_columns")
    if user_cols:
        parts = [c.strip() for c in user_cols.split(",")]
        if len(parts) != 4:
            errors.append(
                "dataset.user_columns needs exactly 4 comma-separated names "
                "(verified, followers, followees, tweets)")
        else:
            schema_kwargs.update(user_verified=parts[0], user_followers=parts[1],
                                 user_followees=parts[2], user_tweets=parts[3])
    try:
        schema = ColumnSchema(**schema_kwargs)
    except ValueError as exc:
        errors.append(str(exc))
        schema = ColumnSchema()

    map_entries = {key[len("labelmap."):]: value
                   for key, value in raw.items() if key.startswith("labelmap.")}
    label_map = None
    if map_entries:
        try:
            label_map = LabelMap(map_entries)
        except ValueError as exc:
            errors.append(str(exc))
    else:
        label_map = LabelMap.identity()

    feature_set = get("features.set", "handcrafted")
    if feature_set not in FEATURE_SETS:
        errors.append(f"features.set must be one of {', '.join(FEATURE_SETS)}; "
                      f"got {feature_set!r}")
    model_kind = get("model.kind", "logreg")
    if model_kind not in _MODEL_KINDS:
        errors.append(f"model.kind must be one of {', '.join(_MODEL_KINDS)}; "
                      f"got {model_kind!r}")
    model_hyper = {}
    for key, value in raw.items():
        if not key.startswith("model.") or key == "model.kind":
            continue
        name = key[len("model."):]
        caster = _MODEL_HYPER_TYPES.get(name)
        if caster is None:
            errors.append(f"unknown model hyperparameter {name!r}")
            continue
        try:
            model_hyper[name] = caster(value)
        except ValueError:
            errors.append(f"config {key} has invalid value {value!r}")

    seed = args.seed if args.seed is not None else get_int("seed", 0)
    out_dir = Path(args.out_dir) if args.out_dir else Path(get("output.dir", "out"))
    threads = args.threads

    train_settings = hybrid.TrainSettings(
        learning_rate=get_float("hybrid.learning_rate", 0.001),
        momentum=get_float("hybrid.momentum", 0.9),
        epochs=get_int("hybrid.epochs", 20),
        batch_size=get_int("hybrid.batch_size", 16),
        seed=seed)

    def path_or_none(key: str) -> Path | None:
        text = get(key)
        return Path(text) if text else None

    config = RunConfig(
        dataset_path=Path(dataset_path or "missing"),
        schema=schema,
        label_map=label_map or LabelMap.identity(),
        dataset_name=get("dataset.name") or Path(dataset_path or "dataset").stem,
        feature_set=feature_set,
        model_kind=model_kind,
        model_hyper=model_hyper,
        seed=seed,
        cv_k=get_int("cv.k", 10),
        cv_stratified=get_bool("cv.stratified", False),
        out_dir=out_dir,
        threads=threads,
        slang_path=path_or_none("features.slang_lexicon"),
        interj_path=path_or_none("features.interjection_lexicon"),
        word_vectors_path=path_or_none("embeddings.word_vectors"),
        sentence_vectors_path=path_or_none("embeddings.sentence_vectors"),
        bow_options=BowOptions(
            min_count=get_int("bow.min_count", 5),
            min_length=get_int("bow.min_length", 2),
            cap=get_int("bow.cap", 10000),
            cap_mode=get("bow.cap_mode", "occurrences"),
            fold_safe=get_bool("bow.fold_safe", False)),
        hybrid_p=get_int("hybrid.p", 32),
        hybrid_q=get_int("hybrid.q", 128),
        hybrid_activation=get("hybrid.activation", "relu"),
        train_settings=train_settings)
    if config.bow_options.cap_mode not in ("occurrences", "vocab"):
        errors.append("bow.cap_mode must be 'occurrences' or 'vocab'")
    if config.hybrid_activation not in ("relu", "identity"):
        errors.append("hybrid.activation must be 'relu' or 'identity'")
    if config.cv_k < 2:
        errors.append("cv.k must be >= 2")
    return config


def _validate_for_command(config: RunConfig, command: str, errors: list[str]) -> None:
    if not config.dataset_path.exists():
        errors.append(f"dataset file not found: {config.dataset_path}")
    needs_features = command in ("featurize", "train", "cross-validate")
    if needs_features:
        if "handcrafted" in config.feature_set:
            for label, path in (("slang lexicon", config.slang_path),
                                ("interjection lexicon", config.interj_path)):
                if path is not None and not path.exists():
                    errors.append(f"{label} file not found: {path}")
        if config.feature_set == "word-embeddings":
            if config.word_vectors_path is None:
                errors.append("features.set=word-embeddings needs "
                              "embeddings.word_vectors")
            elif not config.word_vectors_path.exists():
                errors.append(
                    f"word vector file not found: {config.word_vectors_path}")
        if "sentence-vectors" in config.feature_set:
            if config.sentence_vectors_path is None:
                errors.append(f"features.set={config.feature_set} needs "
                              "embeddings.sentence_vectors")
            elif not config.sentence_vectors_path.exists():
                errors.append(f"sentence vector file not found: "
                              f"{config.sentence_vectors_path}")
    if command in ("train", "cross-validate"):
        if config.model_kind == HYBRID_KIND \
                and config.feature_set != "handcrafted+sentence-vectors":
            errors.append("model.kind=hybrid requires "
                          "features.set=handcrafted+sentence-vectors")
        if config.model_kind != HYBRID_KIND:
            try:
                models.ModelSpec(config.model_kind, dict(config.model_hyper),
                                 config.seed)
            except ValueError as exc:
                errors.append(str(exc))
    if command == "embed":
        if config.word_vectors_path is None:
            errors.append("embed needs embeddings.word_vectors")
        elif not config.word_vectors_path.exists():
            errors.append(f"word vector file not found: {config.word_vectors_path}")
    if command == "featurize" and "bow" in config.feature_set:
        errors.append("featurize exports dense feature sets; use build-vocab "
                      "for the bag-of-words artifacts")


def _load_artifacts(config: RunConfig) -> Artifacts:
    slang = interj = None
    if "handcrafted" in config.feature_set:
        slang = load_slang_lexicon(config.slang_path)
        interj = load_interjection_lexicon(config.interj_path)
    word_table = None
    if config.feature_set == "word-embeddings" or config.word_vectors_path:
        if config.word_vectors_path:
            word_table = embeddings.load_word_vectors(config.word_vectors_path)
    sent_table = None
    if "sentence-vectors" in config.feature_set and config.sentence_vectors_path:
        sent_table = embeddings.load_sentence_vectors(config.sentence_vectors_path)
    return Artifacts(slang=slang, interjections=interj, word_vectors=word_table,
                     sentence_vectors=sent_table, bow_options=config.bow_options)


def _load_data(config: RunConfig) -> Dataset:
    return load_dataset(config.dataset_path, config.schema, config.label_map,
                        name=config.dataset_name)


def _make_pipeline(config: RunConfig, artifacts: Artifacts,
                   d_h: int | None = None, d_e: int | None = None) -> Pipeline:
    if config.model_kind == HYBRID_KIND:
        hybrid_config = None
        if d_h is not None and d_e is not None:
            hybrid_config = hybrid.HybridConfig(
                d_h=d_h, d_e=d_e, p=config.hybrid_p, q=config.hybrid_q,
                activation=config.hybrid_activation)
        return Pipeline(config.feature_set, HYBRID_KIND, artifacts,
                        hybrid_config=hybrid_config,
                        train_settings=config.train_settings)
    spec = models.ModelSpec(config.model_kind, dict(config.model_hyper), config.seed)
    return Pipeline(config.feature_set, config.model_kind, artifacts,
                    model_spec=spec, threads=config.threads)


# -- commands ---------------------------------------------------------------

def cmd_featurize(config: RunConfig) -> int:
    dataset = _load_data(config)
    artifacts = _load_artifacts(config)
    pipe = _make_pipeline(config, artifacts) if config.model_kind != HYBRID_KIND \
        else Pipeline(config.feature_set, "logreg", artifacts,
                      model_spec=models.ModelSpec("logreg", seed=config.seed))
    prepared = pipe.prepare(dataset)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    out_path = config.out_dir / f"features_{config.dataset_name}.tsv"
    if config.feature_set == "handcrafted":
        matrix = prepared.hand
        features.write_feature_matrix(out_path, dataset.ids(), matrix)
    else:
        _, matrix = pipe._design_matrix(prepared, np.arange(len(dataset)))
        names = [f"e{i}" for i in range(matrix.shape[1])]
        if config.feature_set == "handcrafted+sentence-vectors":
            hand_names = features.feature_names(prepared.hand.shape[1])
            names = list(hand_names) + [f"e{i}" for i in
                                        range(matrix.shape[1] - len(hand_names))]
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("id\t" + "\t".join(names) + "\n")
            for rec_id, row in zip(dataset.ids(), matrix):
                cells = "\t".join(format(v, ".17g") for v in row)
                fh.write(f"{rec_id}\t{cells}\n")
    print(f"wrote {out_path} ({len(dataset)} rows, "
          f"{matrix.shape[1]} feature columns)")
    return 0


def cmd_build_vocab(config: RunConfig) -> int:
    dataset = _load_data(config)
    tokens = [tokenize(normalize(t)) for t in dataset.texts()]
    opts = config.bow_options
    vocab = bow.build_vocab(tokens, min_count=opts.min_count,
                            min_length=opts.min_length, cap=opts.cap,
                            cap_mode=opts.cap_mode)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    out_path = config.out_dir / f"vocab_{config.dataset_name}.tsv"
    bow.save_vocab(out_path, vocab)
    print(f"wrote {out_path} ({len(vocab)} terms over {vocab.corpus_size} documents)")
    return 0


def cmd_embed(config: RunConfig) -> int:
    dataset = _load_data(config)
    table = embeddings.load_word_vectors(config.word_vectors_path)
    items = []
    for record in dataset.records:
        toks = tokenize(normalize(record.text))
        items.append((record.id, embeddings.average_embed(toks, table)))
    config.out_dir.mkdir(parents=True, exist_ok=True)
    out_path = config.out_dir / f"avg_vectors_{config.dataset_name}.tsv"
    embeddings.write_sentence_vectors(out_path, items, table.dimension,
                                      comments=("source=word-vector-average",))
    print(f"wrote {out_path} ({len(items)} vectors, dim={table.dimension})")
    return 0


def cmd_train(config: RunConfig) -> int:
    dataset = _load_data(config)
    artifacts = _load_artifacts(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    y = dataset.labels()
    all_rows = np.arange(len(dataset))
    if config.model_kind == HYBRID_KIND:
        slang = artifacts.slang
        hand = features.extract_matrix(dataset, slang, artifacts.interjections)
        sent = artifacts.sentence_vectors.matrix_for(dataset.ids())
        scaler = models.Standardizer.fit(hand)
        H = scaler.transform(hand)
        config_h = hybrid.HybridConfig(
            d_h=H.shape[1], d_e=sent.shape[1], p=config.hybrid_p,
            q=config.hybrid_q, activation=config.hybrid_activation)
        class_idx = np.where(y == 1, hybrid.INFORMATIVE_CLASS,
                             hybrid.NOT_INFORMATIVE_CLASS)
        params = hybrid.train_hybrid(config_h, config.train_settings, H, sent,
                                     class_idx)
        out_path = config.out_dir / f"model_hybrid_{config.dataset_name}.tsv"
        hybrid.save_params(out_path, params, seed=config.seed,
                           layout=f"{config.feature_set}/1")
        acc = float(np.mean(
            (hybrid.predict_hybrid_batch(params, H, sent)
             == hybrid.INFORMATIVE_CLASS).astype(int) == y))
    else:
        pipe = _make_pipeline(config, artifacts)
        prepared = pipe.prepare(dataset)
        X_train, X_all = pipe._design_matrix(prepared, all_rows)
        model = models.train(pipe.model_spec, X_train, y,
                             layout=pipe.layout_tag(prepared))
        out_path = (config.out_dir /
                    f"model_{config.model_kind}_{config.dataset_name}.tsv")
        model.save(out_path)
        acc = float(np.mean(model.predict(X_all) == y))
    print(f"wrote {out_path} (training accuracy {acc:.4f})")
    return 0


def cmd_cross_validate(config: RunConfig) -> int:
    dataset = _load_data(config)
    artifacts = _load_artifacts(config)
    plan = make_folds(dataset, config.cv_k, config.seed,
                      stratified=config.cv_stratified)
    d_h = d_e = None
    if config.model_kind == HYBRID_KIND:
        d_h = 16 if dataset.has_user_meta else 12
        d_e = artifacts.sentence_vectors.dimension
    pipe = _make_pipeline(config, artifacts, d_h=d_h, d_e=d_e)
    report = evaluate.cross_validate(dataset, plan, pipe, seed=config.seed)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    stem = f"cv_{pipe.name}_{config.dataset_name}".replace("/", "-")
    report_path = config.out_dir / f"{stem}.tsv"
    evaluate.write_report(report_path, report)
    table_path = config.out_dir / f"{stem}.txt"
    with open(table_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(evaluate.render_report(evaluate.read_report(report_path)))
    for fold, reason in report.failures:
        print(f"fold {fold} failed: {reason}", file=sys.stderr)
    if not report.fold_metrics:
        print("error: every fold failed", file=sys.stderr)
        return RUNTIME_ERROR
    print(f"{pipe.name} on {dataset.name}: macro-F1 {report.cell('macro_f1')}")
    print(f"wrote {report_path}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    rows = []
    for path in args.reports:
        rows.extend(evaluate.read_report(path))
    sys.stdout.write(evaluate.render_report(rows, metric=args.metric))
    return 0


# -- argument wiring ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="postsift",
        description="Classify short posts as informative vs. not informative.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_command(name: str, help_text: str):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, type=Path,
                         help="run config file (key = value lines)")
        cmd.add_argument("--out-dir", default=None,
                         help="output directory (overrides output.dir)")
        cmd.add_argument("--seed", type=int, default=None,
                         help="top-level RNG seed (overrides config seed)")
        cmd.add_argument("--threads", type=int, default=1,
                         help="worker threads for parallel-friendly steps")
        return cmd

    add_config_command("featurize", "export a dense feature matrix")
    add_config_command("build-vocab", "build and save the TF-IDF vocabulary")
    add_config_command("embed", "average word vectors per record")
    add_config_command("train", "train one model on the full dataset")
    add_config_command("cross-validate", "run seeded k-fold cross-validation")

    rep = sub.add_parser("report", help="merge and render CV report files")
    rep.add_argument("reports", nargs="+", type=Path)
    rep.add_argument("--metric", default="macro_f1",
                     choices=("macro_precision", "macro_recall", "macro_f1"))
    return parser


_COMMANDS = {
    "featurize": cmd_featurize,
    "build-vocab": cmd_build_vocab,
    "embed": cmd_embed,
    "train": cmd_train,
    "cross-validate": cmd_cross_validate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; remap to the documented code 1
        # (0 stays 0 for --help).
        return 0 if exc.code == 0 else USAGE_ERROR

    if args.command == "report":
        try:
            return cmd_report(args)
        except (ValueError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return RUNTIME_ERROR

    if not args.config.exists():
        print(f"error: config file not found: {args.config}", file=sys.stderr)
        return USAGE_ERROR
    errors: list[str] = []
    try:
        raw = parse_config_file(args.config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    config = _build_config(raw, args, errors)
    _validate_for_command(config, args.command, errors)
    if errors:
        for message in errors:
            print(f"config error: {message}", file=sys.stderr)
        return USAGE_ERROR

    try:
        return _COMMANDS[args.command](config)
    except (DatasetError, bow.EmptyVocabularyError,
            embeddings.VectorFileError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
