from __future__ import annotations

import io
import json
from fractions import Fraction
from pathlib import Path

import pytest

from ghmetrics import cli

GOLDEN = Path(__file__).parent / "golden"


def run(argv, cwd=GOLDEN):
    import os

    here = os.getcwd()
    os.chdir(cwd)
    try:
        out = io.StringIO()
        code = cli.run([str(a) for a in argv], out)
    finally:
        os.chdir(here)
    return code, out.getvalue()


def test_decimal_strings_parse_exactly():
    doc = cli.parse_document(cli.loads_json(
        '{"schema_version": "1", "space": {"labels": [0, 1], "matrix": [[0, 0.1], [0.1, 0]]}}'))
    assert doc.space.d(0, 1) == Fraction(1, 10)


def test_parse_error_reports_position():
    with pytest.raises(cli.ParseError) as exc:
        cli.loads_json('{"a": 1,\n  ]')
    assert exc.value.line == 2


def test_schema_version_is_checked():
    with pytest.raises(cli.ParseError):
        cli.parse_document({"space": {"labels": [0], "matrix": [[0]]}})


def test_unknown_labels_in_structure_rejected():
    with pytest.raises(cli.ValidationError):
        cli.parse_document({"schema_version": "1", "space": {"labels": [0], "matrix": [[0]]},
                            "structure": {"kind": "point", "point": 5}})


def test_unknown_subcommand_exits_two():
    code, _ = run(["frobnicate"])
    assert code == 2


def test_hausdorff_example():
    code, out = run(["dist", "--kind", "hausdorff", "path3_a.json", "path3_b.json"])
    doc = json.loads(out)
    assert code == 0 and doc["value"] == "2" and doc["kind"] == "exact"


def test_gh_example_has_witness():
    code, out = run(["dist", "--kind", "gh", "--enumerate", "two1.json", "two3.json"])
    doc = json.loads(out)
    assert doc["value"] == "1" and doc["witness"]["correspondence"] == [["a", "a"], ["b", "b"]]


def test_entropy_example():
    doc = json.loads(run(["entropy", "grid11.json", "--eps", "0.1", "--exact"])[1])
    assert doc["value"] == 4 and len(doc["witness"]["profile"][0]["centers"]) == 4


def test_missing_file_exits_two(tmp_path):
    assert run(["validate", tmp_path / "absent.json"])[0] == 2


def test_sandwich_is_seed_deterministic():
    argv = ["sandwich", "two1.json", "two3.json", "--trials", "4", "--seed", "9"]
    assert run(argv) == run(argv)
