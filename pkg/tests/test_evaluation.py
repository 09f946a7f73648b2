import numpy as np
import pytest

from psverify import evaluation
from psverify.evaluation import (
    EvalReport,
    ManifestEntry,
    SystemCounts,
    UtteranceOutcome,
    VOWEL_FORMANTS,
    aggregate_outcomes,
    format_report,
    load_manifest,
    make_synthetic_corpus,
    run_evaluation,
    run_training,
    synth_vowel,
    write_manifest,
    write_report_csv,
)
from psverify.features import count_extrema
from psverify.modeling import ModelSet


class TestSynthVowel:
    def test_source_period_exact(self):
        buf = synth_vowel(100.0, (), 0.5, 16000, seed=4)
        impulses = np.nonzero(buf.samples)[0]
        assert np.all(np.diff(impulses) == 160)

    def test_pulse_train_extrema_known(self):
        buf = synth_vowel(100.0, (), 0.5, 16000, seed=4)
        impulses = np.nonzero(buf.samples)[0]
        start = int(impulses[1]) - 80  # impulse interior to the window scan
        assert count_extrema(buf, (start, 160)) == (1, 0, 0, 0)

    def test_same_seed_bit_identical(self):
        a = synth_vowel(142.0, VOWEL_FORMANTS["e"], 0.3, 16000, seed=99)
        b = synth_vowel(142.0, VOWEL_FORMANTS["e"], 0.3, 16000, seed=99)
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_silence_padding(self):
        buf = synth_vowel(100.0, VOWEL_FORMANTS["a"], 0.25, 16000, seed=1, silence_pad_s=0.05)
        assert len(buf) == int(0.25 * 16000) + 2 * 800
        assert np.all(buf.samples[:800] == 0.0)
        assert np.all(buf.samples[-800:] == 0.0)

    def test_invalid_f0(self):
        with pytest.raises(ValueError, match="f0"):
            synth_vowel(9000.0, (), 0.2, 16000)

    def test_formant_beyond_nyquist(self):
        with pytest.raises(ValueError, match="Nyquist"):
            synth_vowel(100.0, ((9000.0, 60.0),), 0.2, 16000)

    def test_too_many_formants(self):
        with pytest.raises(ValueError, match="three"):
            synth_vowel(100.0, ((500, 60), (1000, 60), (1500, 60), (2000, 60)), 0.2)


class TestSyntheticCorpus:
    def test_counts_and_manifest(self, tmp_path):
        manifest, entries = make_synthetic_corpus(
            tmp_path, n_speakers=2, train_per_vowel=1, test_per_vowel=1, seed=5
        )
        assert len(entries) == 2 * 5 * 2
        loaded = load_manifest(manifest)
        assert len(loaded) == len(entries)
        assert sum(1 for e in loaded if e.split == "train") == 10

    def test_same_seed_identical(self, tmp_path):
        m1, e1 = make_synthetic_corpus(tmp_path / "a", 2, 1, 1, seed=5)
        m2, e2 = make_synthetic_corpus(tmp_path / "b", 2, 1, 1, seed=5)
        assert m1.read_text() == m2.read_text()
        assert e1 == e2
        for entry in e1[:3]:
            assert ((tmp_path / "a" / entry.path).read_bytes()
                    == (tmp_path / "b" / entry.path).read_bytes())

    def test_single_speaker_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="two speakers"):
            make_synthetic_corpus(tmp_path, n_speakers=1)


class TestManifest:
    def test_round_trip(self, tmp_path):
        entries = [
            ManifestEntry("x.txt", "s01", "a", "train"),
            ManifestEntry("y.txt", "s02", "u", "test"),
        ]
        p = tmp_path / "manifest.csv"
        write_manifest(entries, p)
        loaded = load_manifest(p)
        assert [e.speaker_id for e in loaded] == ["s01", "s02"]
        assert loaded[0].path.endswith("x.txt")

    def test_bad_vowel_reports_line(self, tmp_path):
        p = tmp_path / "manifest.csv"
        p.write_text("path,speaker_id,vowel,split\nx.txt,s01,q,train\n")
        with pytest.raises(ValueError, match="line 2"):
            load_manifest(p)

    def test_missing_column(self, tmp_path):
        p = tmp_path / "manifest.csv"
        p.write_text("path,speaker_id\nx.txt,s01\n")
        with pytest.raises(ValueError, match="columns"):
            load_manifest(p)

    def test_empty_rejected(self, tmp_path):
        p = tmp_path / "manifest.csv"
        p.write_text("path,speaker_id,vowel,split\n")
        with pytest.raises(ValueError, match="empty"):
            load_manifest(p)


def outcome(vowel, true, cep, tem, path="f.txt"):
    return UtteranceOutcome(path, true, vowel, cep, tem)


class TestAggregation:
    def random_outcomes(self, rng, n=300):
        sids = ["s1", "s2", "s3"]
        return [
            outcome(
                rng.choice(list("aeiou")),
                rng.choice(sids),
                rng.choice(sids),
                rng.choice(sids),
            )
            for _ in range(n)
        ]

    def test_accounting_identities(self):
        rng = np.random.default_rng(18)
        report = aggregate_outcomes(self.random_outcomes(rng))
        for counts in report.systems.values():
            assert counts.correct + counts.wrong == counts.accepted
            assert counts.accepted + counts.rejected == counts.total
        combined = report.systems["combined"]
        assert sum(r.total for r in report.vowel_rows) == combined.total
        assert sum(r.rejected for r in report.vowel_rows) == combined.rejected
        assert sum(r.correct for r in report.vowel_rows) == combined.correct

    def test_combined_wrong_requires_agreeing_wrong(self):
        rng = np.random.default_rng(19)
        outcomes = self.random_outcomes(rng)
        report = aggregate_outcomes(outcomes)
        wrong = [
            o for o in outcomes
            if o.combined_accepted and o.combined_pick != o.speaker_id
        ]
        assert len(wrong) == report.systems["combined"].wrong
        for o in wrong:
            assert o.cepstral_pick == o.temporal_pick != o.speaker_id

    def test_zero_accepted_vowel_has_undefined_accuracy(self):
        outcomes = [outcome("a", "s1", "s1", "s2") for _ in range(5)]
        report = aggregate_outcomes(outcomes)
        row = report.vowel_rows[0]
        assert row.accepted == 0 and row.accuracy is None
        assert "n/a" in format_report(report)

    def test_inconsistent_counts_rejected(self):
        with pytest.raises(ValueError):
            SystemCounts(total=10, accepted=5, correct=3, wrong=1, rejected=5)


class TestRunTraining:
    def test_small_corpus_models(self, small_corpus, small_models):
        assert len(small_models.models) == 15  # 3 speakers x 5 vowels
        for model in small_models.models.values():
            assert model.n_utterances == 2

    def test_unreadable_file_warns_and_continues(self, small_corpus, config, caplog):
        _, entries = small_corpus
        group = [e for e in entries if e.split == "train"][:2]
        bogus = ManifestEntry("missing_file.txt", group[0].speaker_id, group[0].vowel, "train")
        with caplog.at_level("WARNING"):
            model_set = run_training([*group, bogus], config)
        assert "missing_file.txt" in caplog.text
        key = (group[0].speaker_id, group[0].vowel)
        assert model_set.models[key].n_utterances == len(
            [e for e in group if (e.speaker_id, e.vowel) == key]
        )

    def test_all_failures_in_group_abort(self, config):
        bogus = [ManifestEntry("nope.txt", "s01", "a", "train")]
        with pytest.raises(ValueError, match=r"\(s01, a\)"):
            run_training(bogus, config)

    def test_no_train_entries(self, config):
        with pytest.raises(ValueError, match="no train"):
            run_training([ManifestEntry("x.txt", "s01", "a", "test")], config)


class TestRunEvaluation:
    def test_identities_and_determinism(self, small_corpus, small_models, config):
        _, entries = small_corpus
        first = run_evaluation(entries, small_models, config)
        second = run_evaluation(entries, small_models, config)
        assert first.outcomes == second.outcomes
        assert first.systems == second.systems
        combined = first.systems["combined"]
        assert combined.total == 15  # 3 speakers x 5 vowels x 1 test

    def test_missing_vowel_models_rejected(self, small_corpus, config):
        _, entries = small_corpus
        partial = ModelSet()
        with pytest.raises(ValueError, match="no models for vowels"):
            run_evaluation(entries, partial, config)

    def test_csv_report_written(self, small_corpus, small_models, config, tmp_path):
        _, entries = small_corpus
        report = run_evaluation(entries, small_models, config)
        write_report_csv(report, tmp_path / "report")
        for name in ("systems.csv", "vowels.csv", "outcomes.csv"):
            assert (tmp_path / "report" / name).exists()
        lines = (tmp_path / "report" / "systems.csv").read_text().splitlines()
        assert lines[0].startswith("system,")
        assert len(lines) == 4

    def test_format_report_contains_tables(self, small_corpus, small_models, config):
        _, entries = small_corpus
        text = format_report(run_evaluation(entries, small_models, config))
        assert "System comparison:" in text
        assert "Per-vowel" in text
        for name in ("cepstral", "temporal", "combined"):
            assert name in text
