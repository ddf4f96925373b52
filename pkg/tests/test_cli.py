import io
import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from donormatch.cli import EXIT_IO, EXIT_OK, EXIT_VALIDATION, main
from donormatch.model_store import load_model
from donormatch.pipeline import Explanation


FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
MODEL = str(FIXTURES / "reference_model.json")
QUERY = (FIXTURES / "reference_query.txt").read_text(encoding="utf-8").strip()


class Test_Cli(unittest.TestCase):
    def setUp(self):
        self.tmp: tempfile.TemporaryDirectory[str] = tempfile.TemporaryDirectory() # pyright: ignore[reportUninitializedInstanceVariable]
        self.addCleanup(self.tmp.cleanup)
        self.dir: Path = Path(self.tmp.name) # pyright: ignore[reportUninitializedInstanceVariable]
        self.store: str = str(self.dir / "registry.ndjson") # pyright: ignore[reportUninitializedInstanceVariable]

    def run_cli(self, *argv: str, stdin: str = "") -> tuple[int, str, str]:
        stdout, stderr = io.StringIO(), io.StringIO()
        code = main(list(argv), stdout=stdout, stderr=stderr, stdin=io.StringIO(stdin))
        return code, stdout.getvalue(), stderr.getvalue()

    def ingest_fixture(self) -> None:
        code, out, _ = self.run_cli("ingest", str(FIXTURES / "reference_persons.csv"), "--store", self.store)
        self.assertEqual(code, EXIT_OK)
        self.assertIn("3 record(s)", out)

    def test_classify_reference_donor(self):
        code, out, _ = self.run_cli("classify", "38", "70", "--model", MODEL)
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("Eligible (eligible 0.96"), out)

    def test_classify_json(self):
        code, out, _ = self.run_cli("classify", "38", "70", "--model", MODEL, "--format", "json")
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(out)
        self.assertEqual(payload["verdict"], "Eligible")
        self.assertAlmostEqual(payload["confidence_eligible"], 0.97, delta=0.01)

    def test_query_reference_persons(self):
        self.ingest_fixture()
        code, out, _ = self.run_cli("query", QUERY, "--store", self.store, "--format", "json")
        self.assertEqual(code, EXIT_OK)

        explanations = [Explanation.model_validate(item) for item in json.loads(out)]
        self.assertEqual([e.record_id for e in explanations], ["p1", "p2", "p3"])
        self.assertEqual([e.priority for e in explanations], ["0.815", "0.324", "0.210"])
        self.assertIsNone(explanations[0].nn_confidence_eligible)

    def test_query_from_stdin_as_table(self):
        self.ingest_fixture()
        code, out, _ = self.run_cli("query", "-", "--store", self.store, stdin=QUERY + "\n")
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(len(lines), 3)
        self.assertIn("p1", lines[0])
        self.assertIn("priority=0.815", lines[0])

    def test_rank(self):
        self.ingest_fixture()
        code, out, _ = self.run_cli("rank", QUERY, "--store", self.store, "--model", MODEL, "--format", "json")
        self.assertEqual(code, EXIT_OK)
        explanations = [Explanation.model_validate(item) for item in json.loads(out)]
        self.assertEqual([e.record_id for e in explanations], ["p1", "p2", "p3"])
        self.assertTrue(all(e.nn_confidence_eligible is not None for e in explanations))

    def test_rank_blood_type_filter(self):
        self.ingest_fixture()
        code, out, _ = self.run_cli("rank", QUERY, "--store", self.store, "--model", MODEL, "--blood-type", "O-")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("no matching donors", out)

    def test_ingest_append(self):
        self.ingest_fixture()
        extra = self.dir / "extra.csv"
        extra.write_text(
            "id,name,blood_type,age,weight_kg,distance_m,days_since_donation,phone\n"
            "p4,Sari,O+,25,55,3000,,\n",
            encoding="utf-8",
        )
        code, out, _ = self.run_cli("ingest", str(extra), "--store", self.store, "--append")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("store holds 4", out)

        code, _, err = self.run_cli("ingest", str(FIXTURES / "reference_persons.csv"), "--store", self.store, "--append")
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("Duplicate donor id", err)

    def test_store_from_environment(self):
        self.ingest_fixture()
        with patch.dict(os.environ, {"DONORMATCH_STORE": self.store}):
            code, out, _ = self.run_cli("query", QUERY)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(len(out.splitlines()), 3)

    def test_parse_error_shows_caret(self):
        self.ingest_fixture()
        code, _, err = self.run_cli("query", 'SELECT * FROM t WHERE usia = Baya', "--store", self.store)
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("donormatch: parse:", err)
        self.assertIn("1:30", err)
        self.assertIn("^", err)

    def test_unknown_label(self):
        self.ingest_fixture()
        code, _, err = self.run_cli("query", 'SELECT * FROM t WHERE usia = "Ancient"', "--store", self.store)
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("Ancient", err)

    def test_missing_store_option(self):
        with patch.dict(os.environ, {}, clear=True):
            code, _, err = self.run_cli("query", QUERY)
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("--store", err)

    def test_missing_file_is_io_error(self):
        code, _, err = self.run_cli("classify", "38", "70", "--model", str(self.dir / "absent.json"))
        self.assertEqual(code, EXIT_IO)
        self.assertIn("donormatch: io:", err)

    def test_invalid_csv_is_validation_error(self):
        bad = self.dir / "bad.csv"
        bad.write_text("id,name\nx,y\n", encoding="utf-8")
        code, _, err = self.run_cli("ingest", str(bad), "--store", self.store)
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("required column is missing", err)

    def test_usage_errors(self):
        code, _, _ = self.run_cli("classify", "thirty", "70")
        self.assertEqual(code, EXIT_VALIDATION)
        code, _, _ = self.run_cli("no-such-command")
        self.assertEqual(code, EXIT_VALIDATION)

    def test_out_of_range_option(self):
        self.ingest_fixture()
        code, _, err = self.run_cli("query", QUERY, "--store", self.store, "--min-strength", "1.5")
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("min_strength", err)

    def test_gen_synthetic_is_deterministic(self):
        first, second = self.dir / "a.csv", self.dir / "b.csv"
        for path in (first, second):
            code, _, _ = self.run_cli("gen-synthetic", "1000", "--seed", "7", "--output", str(path))
            self.assertEqual(code, EXIT_OK)
        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertEqual(len(first.read_text(encoding="utf-8").splitlines()), 1001)

        code, out, _ = self.run_cli("gen-synthetic", "5", "--seed", "7")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("id,age,weight_kg,label\n"))
        self.assertEqual(len(out.splitlines()), 6)

    def test_train_writes_model(self):
        data = self.dir / "train.csv"
        code, _, _ = self.run_cli("gen-synthetic", "60", "--seed", "3", "--output", str(data))
        self.assertEqual(code, EXIT_OK)

        model = self.dir / "model.json"
        code, out, _ = self.run_cli(
            "train", str(data), "--model", str(model),
            "--learning-rate", "0.3", "--epochs", "3", "--folds", "3", "--hidden", "4", "--format", "json",
        )
        self.assertEqual(code, EXIT_OK)

        report = json.loads(out)
        self.assertEqual(len(report["fold_accuracies"]), 3)
        self.assertEqual(report["config"]["learning_rate"], 0.3)
        self.assertEqual(load_model(model).network.layer_sizes, (2, 4, 2))

        code, out, _ = self.run_cli("classify", "30", "70", "--model", str(model))
        self.assertEqual(code, EXIT_OK)
        self.assertRegex(out, r"^(Eligible|Ineligible) \(eligible ")

    def test_train_rejects_bad_hyperparameters(self):
        data = self.dir / "train.csv"
        _ = self.run_cli("gen-synthetic", "20", "--output", str(data))
        code, _, err = self.run_cli("train", str(data), "--model", str(self.dir / "m.json"), "--momentum", "1.5")
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn("momentum", err)

    def assert_single_error(self, code: int, err: str) -> None:
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertTrue(err.startswith("donormatch: "), err)
        self.assertNotIn("Traceback", err)

    def test_negative_seed(self):
        code, out, err = self.run_cli("gen-synthetic", "5", "--seed", "-1")
        self.assert_single_error(code, err)
        self.assertEqual(len(err.strip().splitlines()), 1)
        self.assertIn("seed", err)
        self.assertEqual(out, "")

        data = self.dir / "train.csv"
        _ = self.run_cli("gen-synthetic", "20", "--output", str(data))
        code, _, err = self.run_cli("train", str(data), "--model", str(self.dir / "m.json"), "--seed", "-3")
        self.assert_single_error(code, err)
        self.assertIn("seed", err)

    def test_negative_count(self):
        code, out, err = self.run_cli("gen-synthetic", "-5")
        self.assert_single_error(code, err)
        self.assertEqual(len(err.strip().splitlines()), 1)
        self.assertIn("n must be >= 0", err)
        self.assertEqual(out, "")

    def test_csv_with_invalid_utf8(self):
        bad = self.dir / "bad.csv"
        bad.write_bytes(
            b"id,name,blood_type,age,weight_kg,distance_m,days_since_donation,phone\n"
            b"p1,Er\xffikson,A+,38,70,1302,270,\n"
        )
        code, _, err = self.run_cli("ingest", str(bad), "--store", self.store)
        self.assert_single_error(code, err)
        self.assertIn("row 2", err)
        self.assertIn("UTF-8", err)

    def test_store_with_invalid_utf8(self):
        Path(self.store).write_bytes(b"# donormatch registry v1\n{\"id\": \"\xff\"}\n")
        code, _, err = self.run_cli("query", QUERY, "--store", self.store)
        self.assert_single_error(code, err)
        self.assertEqual(len(err.strip().splitlines()), 1)
        self.assertIn("line 2", err)

    def test_model_with_invalid_utf8(self):
        model = self.dir / "model.json"
        model.write_bytes(b"{\n\xff\n}\n")
        code, _, err = self.run_cli("classify", "38", "70", "--model", str(model))
        self.assert_single_error(code, err)
        self.assertEqual(len(err.strip().splitlines()), 1)
        self.assertIn("line 2", err)

    def test_classify_rejects_non_finite(self):
        for age, weight in (("nan", "70"), ("38", "inf")):
            code, out, err = self.run_cli("classify", age, weight, "--model", MODEL)
            self.assert_single_error(code, err)
            self.assertEqual(len(err.strip().splitlines()), 1)
            self.assertIn("finite", err)
            self.assertEqual(out, "")

    def test_generate_train_rank_repeats_exactly(self):
        self.ingest_fixture()
        runs: list[tuple[bytes, str, str]] = []
        for attempt in ("first", "second"):
            data = self.dir / f"{attempt}.csv"
            model = self.dir / f"{attempt}.json"
            code, _, _ = self.run_cli("gen-synthetic", "80", "--seed", "11", "--noise", "0.05", "--output", str(data))
            self.assertEqual(code, EXIT_OK)
            code, report, _ = self.run_cli(
                "train", str(data), "--model", str(model), "--seed", "11",
                "--learning-rate", "0.3", "--epochs", "5", "--folds", "4", "--format", "json",
            )
            self.assertEqual(code, EXIT_OK)
            code, ranked, _ = self.run_cli("rank", QUERY, "--store", self.store, "--model", str(model), "--format", "json")
            self.assertEqual(code, EXIT_OK)
            runs.append((model.read_bytes(), report, ranked))

        (first_model, first_report, first_ranked), (second_model, second_report, second_ranked) = runs
        self.assertEqual(first_model, second_model)
        self.assertEqual(first_report, second_report)
        self.assertEqual(first_ranked, second_ranked)
        self.assertEqual(len(json.loads(first_report)["fold_accuracies"]), 4)
