import json
import subprocess
import sys

import pytest

from symlin import jsonio
from symlin.symseq import unit_seq

from conftest import DATA_DIR, GOLDEN_DIR, run_cli

MANIFEST = json.loads((GOLDEN_DIR / "manifest.json").read_text())
CORPUS = json.loads((DATA_DIR / "corpus.json").read_text())


def case_args(case):
    return [a.replace("{data}", str(DATA_DIR)) for a in case["args"]]


@pytest.mark.parametrize("case", MANIFEST["cases"], ids=lambda c: c["name"])
def test_golden(case):
    code, out, err = run_cli(case_args(case))
    assert out == (GOLDEN_DIR / f"{case['name']}.out").read_text()
    assert code == case["exit"], err


@pytest.mark.parametrize("case", [c for c in MANIFEST["cases"] if "--format" not in c["args"]], ids=lambda c: c["name"])
def test_golden_reports_match_schema(case):
    code, out, _ = run_cli(case_args(case))
    result = json.loads(out)
    if "status" in result:
        jsonio.validate("report", result)
        assert code == (0 if result["status"] == "pass" else 1)
    else:
        assert code == 0


@pytest.mark.parametrize("entry", CORPUS["files"], ids=lambda e: e["name"])
def test_corpus_validates(entry):
    jsonio.validate(entry["kind"], json.loads((DATA_DIR / entry["name"]).read_text()))


def test_corpus_covers_data_dir():
    listed = {e["name"] for e in CORPUS["files"]}
    assert listed == {p.name for p in DATA_DIR.glob("*.json")} - {"corpus.json"}


@pytest.mark.parametrize(
    "entry,decode,encode",
    [
        ("symseq-a.json", jsonio.symseq_from_json, jsonio.symseq_to_json),
        ("symseq-b.json", jsonio.symseq_from_json, jsonio.symseq_to_json),
        ("com3.json", jsonio.operad_from_json, jsonio.operad_to_json),
        ("ass3.json", jsonio.operad_from_json, jsonio.operad_to_json),
        ("abcd-g.json", jsonio.funseq_from_json, jsonio.funseq_to_json),
        ("sign-g.json", jsonio.funseq_from_json, jsonio.funseq_to_json),
        ("point-half.json", jsonio.sphere_point_from_json, jsonio.sphere_point_to_json),
        ("point-inf.json", jsonio.sphere_point_from_json, jsonio.sphere_point_to_json),
    ],
)
def test_round_trip(entry, decode, encode):
    # decoded objects hold their actions as functions, so compare encodings
    data = json.loads((DATA_DIR / entry).read_text())
    assert encode(decode(data)) == data


class TestSchemas:
    def test_emit(self, tmp_path):
        code, out, _ = run_cli(["emit-schemas", "--out", tmp_path])
        assert code == 0
        files = sorted(p.name for p in tmp_path.iterdir())
        assert len(files) == 5
        assert files == sorted(json.loads(out)["written"])
        for p in tmp_path.iterdir():
            assert json.loads(p.read_text())["$schema"].endswith("2020-12/schema")

    def test_unit_seq_validates(self):
        jsonio.validate("symseq", jsonio.symseq_to_json(unit_seq(4)))

    def test_fail_report_needs_witness(self):
        with pytest.raises(jsonio.DataError):
            jsonio.validate("report", {"status": "fail"})
        jsonio.validate("report", {"status": "fail", "witness": {"n": 1}})

    def test_error_path(self):
        with pytest.raises(jsonio.DataError) as info:
            jsonio.validate("symseq", {"levels": [{"n": 1, "elements": [3]}]})
        assert info.value.path == "$.levels[0].elements[0]"


class TestDecodingErrors:
    def test_level_numbering(self):
        with pytest.raises(jsonio.DataError, match=r"\$\.levels\[0\]\.n"):
            jsonio.symseq_from_json({"levels": [{"n": 2, "elements": []}]})

    def test_generator_out_of_range(self):
        data = {"levels": [{"n": 1, "elements": ["a"]}, {"n": 2, "elements": ["b"], "action": {"2": {"b": "b"}}}]}
        with pytest.raises(jsonio.DataError, match=r"levels\[1\]\.action\.2"):
            jsonio.symseq_from_json(data)

    def test_action_outside_level(self):
        data = {"levels": [{"n": 1, "elements": []}, {"n": 2, "elements": ["b"], "action": {"1": {"b": "z"}}}]}
        with pytest.raises(jsonio.DataError):
            jsonio.symseq_from_json(data)

    def test_exponent_length(self):
        data = {"levels": [{"n": 1, "terms": [{"coeff": ["a"], "exp": [1, 1]}]}]}
        with pytest.raises(jsonio.DataError, match=r"terms\[0\]\.exp"):
            jsonio.funseq_from_json(data)

    def test_gamma_parts(self):
        data = json.loads((DATA_DIR / "com3.json").read_text())
        data["gamma"][0]["k"] += 1
        with pytest.raises(jsonio.DataError, match=r"\$\.gamma\[0\]"):
            jsonio.operad_from_json(data)

    def test_sphere_point_sum(self):
        with pytest.raises(jsonio.DataError):
            jsonio.sphere_point_from_json(["1/2", "1/3"])


class TestCommands:
    def test_stdin(self, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO((DATA_DIR / "com3.json").read_text()))
        code, out, _ = run_cli(["check-operad", "--input", "-", "--max-level", "3"])
        assert code == 0 and json.loads(out)["status"] == "pass"

    def test_inline_json(self):
        doc = json.dumps({"levels": [{"n": 1, "elements": ["x"]}]})
        code, out, _ = run_cli(["compose-symseq", "--a", doc, "--b", doc, "--max-level", "1"])
        assert code == 0
        assert json.loads(out) == {"levels": [{"n": 1, "elements": ["[{{1}};x;x]"]}]}
        assert run_cli(["compose-symseq", "--a", doc, "--b", doc, "--max-level", "2"])[0] == 2

    def test_output_file(self, tmp_path):
        target = tmp_path / "out.json"
        code, out, _ = run_cli(["partitions", "3", "--output", target])
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["count"] == 5

    def test_timing_flag(self):
        code, out, _ = run_cli(["partitions", "3", "--timing"])
        assert "timing_s" in json.loads(out)
        _, out, _ = run_cli(["partitions", "3"])
        assert "timing_s" not in json.loads(out)

    def test_partition_counts(self):
        _, out, _ = run_cli(["partitions", "4", "--k", "2"])
        assert json.loads(out)["count"] == 7

    def test_text_format(self):
        code, out, _ = run_cli(["partitions", "2", "--format", "text"])
        assert code == 0 and out.splitlines()[0] == "n: 2"

    def test_seed_determinism(self):
        args = ["sphere", "stabilize", "--samples", "50", "--seed", "11"]
        assert run_cli(args) == run_cli(args)

    def test_validate_command(self):
        code, out, _ = run_cli(["validate", "--kind", "operad", "--input", DATA_DIR / "ass3.json"])
        assert code == 0 and json.loads(out)["valid"]


class TestInputErrors:
    def test_malformed_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"levels": [\n  {"n": 1,]\n}')
        code, out, err = run_cli(["check-operad", "--input", bad, "--max-level", "2"])
        assert code == 2 and out == ""
        assert "line 2" in err

    def test_missing_file(self, tmp_path):
        code, _, err = run_cli(["multilinearize", "--input", tmp_path / "absent.json"])
        assert code == 2 and "cannot read" in err

    def test_schema_error_has_path(self):
        code, _, err = run_cli(["validate", "--kind", "symseq", "--input", DATA_DIR / "com3.json"])
        assert code == 2 and "$" in err

    def test_wrong_kind_path(self):
        doc = json.dumps({"levels": [{"n": 1, "elements": ["a", 1]}]})
        code, _, err = run_cli(["compose-symseq", "--a", doc, "--b", doc, "--max-level", "1"])
        assert code == 2 and "$.levels[0].elements[1]" in err

    def test_ell_below_kappa(self):
        code, _, err = run_cli(["conncalc", "report", "--c", "0", "--kappa", "2", "--ell", "1"])
        assert code == 2 and "kappa" in err

    def test_bad_point(self):
        code, _, _ = run_cli(["sphere", "gamma", "--s", "1/2,1/3", "--t", "1", "--t", "1"])
        assert code == 2

    def test_arity_mismatch(self):
        code, _, _ = run_cli(["sphere", "gamma", "--s", "1/2,1/2", "--t", "1"])
        assert code == 2

    def test_missing_point(self):
        assert run_cli(["sphere", "gamma"])[0] == 2
        assert run_cli(["sphere", "coend", "--s", "1"])[0] == 2

    def test_truncation(self):
        code, _, _ = run_cli(["check-operad", "--input", DATA_DIR / "com3.json", "--max-level", "4"])
        assert code == 2

    def test_argparse_usage_error(self):
        with pytest.raises(SystemExit) as info:
            run_cli(["partitions"])
        assert info.value.code == 2


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "symlin.cli", "sphere", "gamma", "--s", "1/2,1/2", "--t", "1", "--t", "1/3,2/3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"point": ["1/2", "1/6", "1/3"]}
