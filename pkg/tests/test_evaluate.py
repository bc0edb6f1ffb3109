import numpy as np
import pytest

from postsift.corpus import ColumnSchema, LabelMap, load_dataset, make_folds
from postsift.evaluate import (
    CVReport,
    MacroMetrics,
    confusion,
    cross_validate,
    format_cell,
    macro_metrics,
    read_report,
    render_report,
    write_report,
)
from postsift.models import ModelSpec
from postsift.pipeline import Artifacts, Pipeline
from postsift.textproc import Lexicon

from helpers import PKG_DATA

ONTOPIC_MAP = LabelMap({"on-topic": "Informative", "off-topic": "NotInformative"})


def brute_force_confusion(y_true, y_pred):
    counts = np.zeros((2, 2), dtype=int)
    for t, p in zip(y_true, y_pred):
        counts[t][p] += 1
    return counts


def brute_force_macro(counts):
    per = {}
    for c in (0, 1):
        tp = counts[c][c]
        fp = counts[1 - c][c]
        fn = counts[c][1 - c]
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        per[c] = (p, r, f)
    return tuple(np.mean([per[0][i], per[1][i]]) for i in range(3))


class TestConfusion:
    def test_perfect_predictions(self):
        cm = confusion([1, 1, 1, 0, 0], [1, 1, 1, 0, 0])
        assert cm.counts[1, 1] == 3 and cm.counts[0, 0] == 2
        assert cm.counts[0, 1] == 0 and cm.counts[1, 0] == 0

    def test_all_wrong(self):
        cm = confusion([1, 0], [0, 1])
        assert cm.counts[1, 0] == 1 and cm.counts[0, 1] == 1
        assert cm.counts[0, 0] == 0 and cm.counts[1, 1] == 0

    def test_random_against_brute_force(self):
        rng = np.random.default_rng(33)
        y_true = rng.integers(0, 2, size=200)
        y_pred = rng.integers(0, 2, size=200)
        cm = confusion(y_true, y_pred)
        assert np.array_equal(cm.counts, brute_force_confusion(y_true, y_pred))

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            confusion([1, 0], [1])


class TestMacroMetrics:
    def test_perfect(self):
        m = macro_metrics(confusion([1, 0, 1], [1, 0, 1]))
        assert m.macro_precision == m.macro_recall == m.macro_f1 == 1.0

    def test_always_wrong_is_zero(self):
        m = macro_metrics(confusion([1, 0], [0, 1]))
        assert m.macro_f1 == 0.0

    def test_never_predicted_class_zero_by_convention(self):
        m = macro_metrics(confusion([1, 0, 0], [0, 0, 0]))
        assert m.precision[1] == 0.0
        assert m.recall[1] == 0.0
        assert m.f1[1] == 0.0

    def test_fixed_matrix_against_hand_values(self):
        from postsift.evaluate import ConfusionMatrix
        cm = ConfusionMatrix(np.array([[40, 10], [5, 45]]))
        m = macro_metrics(cm)
        want = brute_force_macro([[40, 10], [5, 45]])
        assert abs(m.macro_precision - want[0]) <= 1e-12
        assert abs(m.macro_recall - want[1]) <= 1e-12
        assert abs(m.macro_f1 - want[2]) <= 1e-12

    def test_label_swap_symmetry(self):
        rng = np.random.default_rng(41)
        y_true = rng.integers(0, 2, size=100)
        y_pred = rng.integers(0, 2, size=100)
        m = macro_metrics(confusion(y_true, y_pred))
        swapped = macro_metrics(confusion(1 - y_true, 1 - y_pred))
        assert m.macro_precision == pytest.approx(swapped.macro_precision)
        assert m.macro_recall == pytest.approx(swapped.macro_recall)
        assert m.macro_f1 == pytest.approx(swapped.macro_f1)

    def test_majority_predictor_degenerate_values(self):
        # Constant predictor on a 50/50 split: macro P/R/F1 = 1/4, 1/2, 1/3.
        y_true = np.array([1, 0] * 10)
        y_pred = np.ones(20, dtype=int)
        m = macro_metrics(confusion(y_true, y_pred))
        assert m.macro_precision == pytest.approx(0.25)
        assert m.macro_recall == pytest.approx(0.5)
        assert m.macro_f1 == pytest.approx(1 / 3)


@pytest.fixture(scope="module")
def mini_dataset():
    return load_dataset(PKG_DATA / "mini_corpus.tsv", ColumnSchema(),
                        ONTOPIC_MAP, name="mini")


@pytest.fixture(scope="module")
def hand_pipeline():
    slang = Lexicon(["omg", "lol", "tbh", "ngl", "smh"], "slang")
    interj = Lexicon(["yay", "wow", "meh"], "interjection")
    artifacts = Artifacts(slang=slang, interjections=interj)
    return Pipeline("handcrafted", "logreg", artifacts,
                    model_spec=ModelSpec("logreg", seed=0))


class TestCrossValidate:
    def test_mini_corpus_logreg(self, mini_dataset, hand_pipeline):
        plan = make_folds(mini_dataset, k=10, seed=42)
        report = cross_validate(mini_dataset, plan, hand_pipeline, seed=42)
        assert report.k == 10
        assert len(report.fold_metrics) == 10
        assert not report.failures
        assert 0.0 <= report.mean("macro_f1") <= 1.0
        vals = report.values("macro_f1")
        assert vals.min() <= report.mean("macro_f1") <= vals.max()

    def test_each_record_evaluated_once(self, mini_dataset):
        plan = make_folds(mini_dataset, k=10, seed=7)
        seen = np.concatenate([plan.fold_indices(i) for i in range(10)])
        assert np.array_equal(np.sort(seen), np.arange(len(mini_dataset)))

    def test_deterministic_reports(self, mini_dataset, hand_pipeline, tmp_path):
        plan = make_folds(mini_dataset, k=5, seed=11)
        a = cross_validate(mini_dataset, plan, hand_pipeline, seed=11)
        b = cross_validate(mini_dataset, plan, hand_pipeline, seed=11)
        pa, pb = tmp_path / "a.tsv", tmp_path / "b.tsv"
        write_report(pa, a)
        write_report(pb, b)
        assert pa.read_bytes() == pb.read_bytes()

    def test_single_class_fold_recorded_as_failure(self, tmp_path):
        rows = ["id\ttext\tlabel"]
        rows += [f"a{i}\tinformative words here {i}\ton-topic" for i in range(9)]
        rows += ["b0\tchatter\toff-topic"]
        path = tmp_path / "skew.tsv"
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        ds = load_dataset(path, ColumnSchema(), ONTOPIC_MAP, name="skew")
        plan = make_folds(ds, k=5, seed=1)
        slang = Lexicon(["omg"], "slang")
        interj = Lexicon(["wow"], "interjection")
        pipe = Pipeline("handcrafted", "gnb",
                        Artifacts(slang=slang, interjections=interj),
                        model_spec=ModelSpec("gnb", seed=0))
        report = cross_validate(ds, plan, pipe, seed=1)
        # The lone negative sits in exactly one fold; evaluating that fold
        # trains on the 8 remaining positives only, so exactly it fails.
        assert len(report.failures) == 1
        assert len(report.fold_metrics) == 4


class TestReportFiles:
    def test_cell_format(self):
        assert format_cell(0.84412, 0.00014) == "84.41(+/- 0.01)"

    def test_single_fold_std_zero(self):
        m = MacroMetrics((1.0, 1.0), (1.0, 1.0), (1.0, 1.0), 1.0, 1.0, 1.0)
        report = CVReport("p", "d", 2, 0, [m])
        assert report.cell() == "100.00(+/- 0.00)"

    def test_write_read_round_trip(self, mini_dataset, hand_pipeline, tmp_path):
        plan = make_folds(mini_dataset, k=4, seed=3)
        report = cross_validate(mini_dataset, plan, hand_pipeline, seed=3)
        path = tmp_path / "report.tsv"
        write_report(path, report)
        rows = read_report(path)
        assert {r.metric for r in rows} == {
            "macro_precision", "macro_recall", "macro_f1"}
        f1_row = next(r for r in rows if r.metric == "macro_f1")
        assert f1_row.mean == pytest.approx(report.mean("macro_f1"))
        assert len(f1_row.folds) == 4

    def test_render_single_report(self):
        from postsift.evaluate import ReportRow
        table = render_report([
            ReportRow("bow+LR", "mini", "macro_f1", 0.5, 0.01, (0.5,))])
        assert "bow+LR" in table
        assert "50.00(+/- 1.00)" in table

    def test_render_merges_multiple(self):
        from postsift.evaluate import ReportRow
        table = render_report([
            ReportRow("bow+LR", "mini", "macro_f1", 0.5, 0.0, ()),
            ReportRow("handcrafted+LR", "mini", "macro_f1", 0.4, 0.0, ()),
        ])
        lines = [l for l in table.splitlines() if l and not l.startswith("-")]
        assert len(lines) == 3  # header + two pipelines

    def test_conflicting_duplicate_cells_rejected(self):
        from postsift.evaluate import ReportRow
        with pytest.raises(ValueError, match="conflicting"):
            render_report([
                ReportRow("bow+LR", "mini", "macro_f1", 0.5, 0.0, ()),
                ReportRow("bow+LR", "mini", "macro_f1", 0.6, 0.0, ()),
            ])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            render_report([])

    def test_malformed_file_rejected(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("this is not a report\n")
        with pytest.raises(ValueError):
            read_report(path)
