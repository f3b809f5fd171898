from __future__ import annotations

import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fixture_path
from tcpel.cli import EXIT_INVALID, EXIT_OK, EXIT_REFUSED, EXIT_USAGE, main
from tcpel.generate import random_kb
from tcpel.rank import StopCondition, anytime_rank
from tcpel.report import emit_report, parse_tsv, ranking_to_dict

TOY = str(fixture_path("toy.tcpkb"))

BAD = """\
A(a)
B(X) -> C(X) @ {m(X)=1, m(a)=0}
mln {
  const a
  1 m(X)
}
"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestReport:
    def test_keys(self, toy_kb):
        d = ranking_to_dict(anytime_rank(toy_kb, StopCondition(max_classes=2)))
        for key in ("atoms", "order", "s", "t", "U", "logU", "provablePairs", "bottomMass", "config"):
            assert key in d
        assert set(d["atoms"][0]) == {"atom", "score", "logScore"}
        assert d["config"]["stop"]["max_classes"] == 2

    def test_zero_budget(self, toy_kb):
        d = json.loads(emit_report(anytime_rank(toy_kb, StopCondition(max_classes=0))))
        assert d["order"] == [] and d["s"] == 0
        assert d["U"] == pytest.approx(64 * math.exp(6.9), rel=1e-12)

    def test_completion_order_begins_with_top_atom(self, toy_kb):
        d = json.loads(emit_report(anytime_rank(toy_kb)))
        assert d["order"][0] == "p(a)" and d["U"] == 0.0 and d["exhausted"]

    def test_json_floats_are_exact(self, toy_kb):
        r = anytime_rank(toy_kb, StopCondition(max_classes=3))
        d = json.loads(emit_report(r))
        assert d["logU"] == r.log_bound
        assert [a["logScore"] for a in d["atoms"]] == [r.log_scores[a] for a in r.order]

    def test_unknown_format(self, toy_kb):
        with pytest.raises(ValueError):
            emit_report(anytime_rank(toy_kb, StopCondition(max_classes=0)), "xml")


@given(st.integers(0, 10**6), st.integers(0, 20))
def test_tsv_round_trip(seed, worlds):
    r = anytime_rank(random_kb(seed), StopCondition(max_worlds=worlds))
    header, rows = parse_tsv(emit_report(r, "tsv"))
    assert header["U"] == r.bound and header["logU"] == r.log_bound
    assert header["s"] == r.worlds and header["t"] == r.classes
    assert rows == [(str(a), r.score(a), r.log_scores[a]) for a in r.order]


class TestCli:
    def test_rank_two_classes(self, capsys):
        code, out, _ = run(capsys, "rank", TOY, "--max-classes", "2", "--output", "json")
        assert code == EXIT_OK
        d = json.loads(out)
        scores = {a["atom"]: a["score"] for a in d["atoms"]}
        assert scores["p(a)"] == pytest.approx(1438.13, abs=0.01)
        assert scores["p(b)"] == pytest.approx(1438.13, abs=0.01)
        assert scores["p(c)"] == pytest.approx(445.86, abs=0.01)
        assert scores["q(c)"] == pytest.approx(445.86, abs=0.01)

    def test_rank_tsv_to_file(self, capsys, tmp_path):
        out = tmp_path / "r.tsv"
        code, stdout, _ = run(capsys, "rank", TOY, "--max-worlds", "3", "--output", "tsv", "--out", str(out))
        assert code == EXIT_OK and stdout == ""
        header, rows = parse_tsv(out.read_text())
        assert header["s"] == 3 and rows

    def test_exact(self, capsys):
        code, out, _ = run(capsys, "exact", TOY)
        assert code == EXIT_OK
        d = json.loads(out)
        assert d["order"][0] == "p(a)"
        assert all(0 < a["probability"] <= 1 for a in d["atoms"])

    def test_rank_to_completion_agrees_with_exact(self, capsys):
        _, ranked, _ = run(capsys, "rank", TOY)
        _, exact, _ = run(capsys, "exact", TOY)
        assert json.loads(ranked)["order"] == json.loads(exact)["order"]

    def test_validate_ok(self, capsys):
        code, out, _ = run(capsys, "validate", TOY)
        assert code == EXIT_OK and "ok" in out

    def test_validate_bad(self, capsys, tmp_path):
        bad = tmp_path / "bad.tcpkb"
        bad.write_text(BAD)
        code, _, err = run(capsys, "validate", str(bad))
        assert code == EXIT_INVALID
        assert "bad.tcpkb:2:" in err and "unifiable" in err

    def test_stats(self, capsys):
        code, out, _ = run(capsys, "stats", TOY)
        assert code == EXIT_OK
        assert "ground atoms: 6" in out and "ground formulas: 6" in out
        assert "worlds: 64" in out and "classes: 64" in out
        assert "projected grounding:" in out

    def test_refusal(self, capsys):
        code, _, err = run(capsys, "exact", TOY, "--cap", "1")
        assert code == EXIT_REFUSED and "refused" in err

    def test_grounding_refusal(self, capsys):
        code, _, _ = run(capsys, "rank", TOY, "--grounding-cap", "2")
        assert code == EXIT_REFUSED

    def test_unknown_flag(self, capsys):
        code, _, err = run(capsys, "rank", TOY, "--bogus")
        assert code == EXIT_USAGE and "usage" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "validate", str(tmp_path / "nope.tcpkb"))
        assert code == EXIT_USAGE
