"""Command-line behavior: exit codes, config precedence, manifests, outputs."""

from __future__ import annotations

import hashlib
import json
import shutil
import subprocess

import pytest


def read_manifest(path):
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture
def extracted(run_cli, fixtures_dir, tmp_path):
    chains = tmp_path / "chains.json"
    result = run_cli("extract", "--input", str(fixtures_dir), "--output", str(chains))
    assert result.code == 0, result.stderr
    return chains


class TestValidate:
    def test_valid_corpus(self, run_cli, fixtures_dir):
        result = run_cli("validate", "--input", str(fixtures_dir))
        assert result.code == 0
        lines = result.stdout.strip().splitlines()
        assert len(lines) == 6
        assert lines[0].startswith("ok story_a.nece.json: story_id=story_a tokens=")

    def test_single_file(self, run_cli, fixtures_dir):
        result = run_cli("validate", "--input", str(fixtures_dir / "story_b.nece.json"))
        assert result.code == 0 and result.stdout.count("ok ") == 1

    def test_malformed_document_names_file_and_code(self, run_cli, tmp_path):
        bad = tmp_path / "broken.json"
        bad.write_text('{"story_id": "x", "tokens": [], "clusters": [], "frames": []}',
                       encoding="utf-8")
        result = run_cli("validate", "--input", str(tmp_path))
        assert result.code == 1
        assert "broken.json" in result.stderr and "E_SYNTAX" in result.stderr

    def test_duplicate_story_ids(self, run_cli, fixtures_dir, tmp_path):
        for name in ("a.json", "b.json"):
            shutil.copy(fixtures_dir / "story_a.nece.json", tmp_path / name)
        result = run_cli("validate", "--input", str(tmp_path))
        assert result.code == 1 and "E_DUPLICATE" in result.stderr

    def test_missing_path_is_usage_error(self, run_cli, tmp_path):
        result = run_cli("validate", "--input", str(tmp_path / "nowhere"))
        assert result.code == 2 and "usage error" in result.stderr


class TestExtract:
    def test_reproduces_golden_chains(self, extracted, golden_dir):
        assert extracted.read_bytes() == (golden_dir / "chains.json").read_bytes()

    def test_summary_line(self, run_cli, fixtures_dir, tmp_path):
        out = tmp_path / "c.json"
        result = run_cli("extract", "--input", str(fixtures_dir), "--output", str(out))
        assert result.stdout.strip().startswith(f"wrote {out} (6 stories, 13 main characters)")

    def test_warnings_reported_on_stderr(self, run_cli, fixtures_dir, tmp_path):
        result = run_cli("extract", "--input", str(fixtures_dir),
                         "--output", str(tmp_path / "c.json"))
        assert "warning: story_a: cycle broken at frame 9 (text position 51)" in result.stderr
        assert "7 event(s) with lemmas outside the lexicon typed as other" in result.stderr

    def test_manifest_written(self, extracted, fixtures_dir):
        manifest_path = extracted.with_name(extracted.name + ".manifest.json")
        manifest = read_manifest(manifest_path)
        assert manifest["tool"] == "nece" and manifest["command"] == "extract"
        assert manifest["config"]["rng_seed"] == 42
        assert len(manifest["inputs"]) == 6
        (output_entry,) = manifest["outputs"]
        digest = hashlib.sha256(extracted.read_bytes()).hexdigest()
        assert output_entry["sha256"] == digest
        assert any("cycle broken" in w for w in manifest["warnings"])
        assert "timestamp" not in json.dumps(manifest).lower()

    def test_missing_input_directory(self, run_cli, tmp_path):
        result = run_cli("extract", "--input", str(tmp_path / "nope"),
                         "--output", str(tmp_path / "c.json"))
        assert result.code == 2

    def test_empty_corpus_is_data_error(self, run_cli, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        result = run_cli("extract", "--input", str(empty),
                         "--output", str(tmp_path / "c.json"))
        assert result.code == 1 and "E_EMPTY_CORPUS" in result.stderr

    def test_invalid_documents_all_reported(self, run_cli, fixtures_dir, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        shutil.copy(fixtures_dir / "story_a.nece.json", corpus / "good.json")
        (corpus / "bad1.json").write_text("{", encoding="utf-8")
        (corpus / "bad2.json").write_text("[]", encoding="utf-8")
        result = run_cli("extract", "--input", str(corpus),
                         "--output", str(tmp_path / "c.json"))
        assert result.code == 1
        assert "bad1.json" in result.stderr and "bad2.json" in result.stderr
        assert "2 invalid document(s)" in result.stderr

    def test_worker_count_does_not_change_output(self, run_cli, fixtures_dir, tmp_path):
        solo = tmp_path / "solo.json"
        pooled = tmp_path / "pooled.json"
        run_cli("extract", "--input", str(fixtures_dir), "--output", str(solo))
        run_cli("extract", "--input", str(fixtures_dir), "--output", str(pooled),
                "--workers", "8")
        assert solo.read_bytes() == pooled.read_bytes()


class TestAnalyze:
    @pytest.mark.parametrize("unit,golden_name", [
        ("unigram", "unigram.csv"),
        ("bigram_before", "bigram_before.csv"),
        ("bigram_after", "bigram_after.csv"),
        ("section", "section.csv"),
    ])
    def test_reproduces_golden_results(self, run_cli, extracted, golden_dir,
                                       tmp_path, unit, golden_name):
        out = tmp_path / f"{unit}.csv"
        result = run_cli("analyze", "--chains", str(extracted), "--unit", unit,
                         "--output", str(out), "--seed", "42")
        assert result.code == 0, result.stderr
        assert out.read_bytes() == (golden_dir / golden_name).read_bytes()

    def test_missing_chains_file(self, run_cli, tmp_path):
        result = run_cli("analyze", "--chains", str(tmp_path / "nope.json"),
                         "--unit", "unigram", "--output", str(tmp_path / "r.csv"))
        assert result.code == 2

    def test_unknown_unit_rejected_by_parser(self, run_cli, extracted, tmp_path):
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "trigram",
                         "--output", str(tmp_path / "r.csv"))
        assert result.code == 2

    def test_huge_min_count_leaves_header_only(self, run_cli, extracted, tmp_path):
        out = tmp_path / "r.csv"
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                         "--output", str(out), "--min-count", "9999")
        assert result.code == 0
        assert out.read_text(encoding="utf-8").count("\n") == 1
        assert "(0 keys, 0 significant)" in result.stdout

    def test_json_side_output(self, run_cli, extracted, tmp_path):
        csv_path = tmp_path / "r.csv"
        json_path = tmp_path / "r.json"
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                         "--output", str(csv_path), "--json", str(json_path))
        assert result.code == 0
        payload = json.loads(json_path.read_text(encoding="utf-8"))
        assert len(payload) == 7
        assert payload[0]["unit"] == "unigram"
        manifest = read_manifest(csv_path.with_name(csv_path.name + ".manifest.json"))
        assert len(manifest["outputs"]) == 2

    def test_summary_counts(self, run_cli, extracted, tmp_path):
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                         "--output", str(tmp_path / "r.csv"))
        assert "(7 keys, 3 significant)" in result.stdout


class TestConfigPrecedence:
    def _manifest_config(self, run_cli, extracted, tmp_path, *extra, env=None):
        out = tmp_path / "out.csv"
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                         "--output", str(out), *extra, env=env)
        assert result.code == 0, result.stderr
        return read_manifest(out.with_name(out.name + ".manifest.json"))["config"]

    def test_defaults(self, run_cli, extracted, tmp_path):
        config = self._manifest_config(run_cli, extracted, tmp_path)
        assert config["rng_seed"] == 42 and config["min_count"] == 5
        assert config["bootstrap_reps"] == 1000 and config["workers"] == 1

    def test_config_file_applies(self, run_cli, extracted, tmp_path):
        cfg = tmp_path / "nece.toml"
        cfg.write_text(
            "# analysis settings\n[analysis]\nseed = 7\nmin_count = 2\n"
            'exclude_classes = "other, travel"\nalways_correct = true\n',
            encoding="utf-8",
        )
        config = self._manifest_config(run_cli, extracted, tmp_path,
                                       "--config", str(cfg))
        assert config["rng_seed"] == 7 and config["min_count"] == 2
        assert config["always_correct"] is True
        assert config["excluded_classes"] == ["other", "travel"]

    def test_flag_beats_config_file(self, run_cli, extracted, tmp_path):
        cfg = tmp_path / "nece.toml"
        cfg.write_text("seed = 7\n", encoding="utf-8")
        config = self._manifest_config(run_cli, extracted, tmp_path,
                                       "--config", str(cfg), "--seed", "9")
        assert config["rng_seed"] == 9

    def test_env_seed_used_as_default(self, run_cli, extracted, tmp_path):
        config = self._manifest_config(run_cli, extracted, tmp_path,
                                       env={"NECE_SEED": "3"})
        assert config["rng_seed"] == 3

    def test_config_file_beats_env_seed(self, run_cli, extracted, tmp_path):
        cfg = tmp_path / "nece.toml"
        cfg.write_text("seed = 7\n", encoding="utf-8")
        config = self._manifest_config(run_cli, extracted, tmp_path,
                                       "--config", str(cfg), env={"NECE_SEED": "3"})
        assert config["rng_seed"] == 7

    def test_flag_beats_env_seed(self, run_cli, extracted, tmp_path):
        config = self._manifest_config(run_cli, extracted, tmp_path, "--seed", "11",
                                       env={"NECE_SEED": "3"})
        assert config["rng_seed"] == 11

    def test_garbage_env_seed(self, run_cli, extracted, tmp_path):
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                         "--output", str(tmp_path / "r.csv"),
                         env={"NECE_SEED": "not-a-number"})
        assert result.code == 2 and "NECE_SEED" in result.stderr

    def test_unknown_config_key(self, run_cli, extracted, tmp_path):
        cfg = tmp_path / "nece.toml"
        cfg.write_text("mystery = 1\n", encoding="utf-8")
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                         "--output", str(tmp_path / "r.csv"), "--config", str(cfg))
        assert result.code == 2 and "mystery" in result.stderr

    def test_malformed_config_line(self, run_cli, extracted, tmp_path):
        cfg = tmp_path / "nece.toml"
        cfg.write_text("seed 7\n", encoding="utf-8")
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                         "--output", str(tmp_path / "r.csv"), "--config", str(cfg))
        assert result.code == 2

    def test_missing_config_file(self, run_cli, extracted, tmp_path):
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                         "--output", str(tmp_path / "r.csv"),
                         "--config", str(tmp_path / "missing.toml"))
        assert result.code == 2

    def test_invalid_config_value_combination(self, run_cli, extracted, tmp_path):
        result = run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                         "--output", str(tmp_path / "r.csv"), "--bootstrap", "0")
        assert result.code == 2


class TestReport:
    def test_charts_and_manifest(self, run_cli, extracted, tmp_path):
        csv_path = tmp_path / "r.csv"
        run_cli("analyze", "--chains", str(extracted), "--unit", "unigram",
                "--output", str(csv_path))
        out_dir = tmp_path / "charts"
        result = run_cli("report", "--results", str(csv_path),
                         "--out-dir", str(out_dir))
        assert result.code == 0
        assert (out_dir / "unigram.svg").is_file()
        assert (out_dir / "significant_share.svg").is_file()
        manifest = read_manifest(out_dir / "manifest.json")
        assert manifest["command"] == "report"
        assert {entry["path"] for entry in manifest["outputs"]} == {
            str(out_dir / "unigram.svg"),
            str(out_dir / "significant_share.svg"),
        }

    def test_missing_results_file(self, run_cli, tmp_path):
        result = run_cli("report", "--results", str(tmp_path / "nope.csv"),
                         "--out-dir", str(tmp_path / "charts"))
        assert result.code == 2

    def test_corrupt_results_file(self, run_cli, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("not,a,results,file\n", encoding="utf-8")
        result = run_cli("report", "--results", str(bad),
                         "--out-dir", str(tmp_path / "charts"))
        assert result.code == 1 and "E_BAD_CSV" in result.stderr


class TestLexiconLookup:
    def test_known_lemma(self, run_cli):
        result = run_cli("lexicon", "lookup", "kill")
        assert result.code == 0
        assert "class=kill" in result.stdout and "stereotype=male" in result.stdout

    def test_unknown_lemma(self, run_cli):
        result = run_cli("lexicon", "lookup", "gallivant")
        assert result.code == 0 and "not in lexicon" in result.stdout

    def test_lookup_lowercases(self, run_cli):
        result = run_cli("lexicon", "lookup", "KILL")
        assert result.code == 0 and "class=kill" in result.stdout


class TestInvocation:
    def test_no_arguments_is_usage_error(self, run_cli):
        assert run_cli().code == 2

    def test_unknown_flag(self, run_cli, fixtures_dir):
        assert run_cli("validate", "--input", str(fixtures_dir), "--frobnicate").code == 2

    def test_console_script_installed(self):
        exe = shutil.which("nece")
        assert exe, "console script should be on PATH after editable install"
        proc = subprocess.run([exe, "--version"], capture_output=True, text=True)
        assert proc.returncode == 0 and proc.stdout.startswith("nece ")
