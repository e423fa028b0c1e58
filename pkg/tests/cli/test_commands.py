import json
import re
from pathlib import Path

import pytest

from app.core.config import settings
from app.main import cli
from app.services.formats import labels_path, read_instance
from app.services.syntax import read_corpus


def invoke(runner, *args):
    return runner.invoke(cli, list(args))


def test_version(runner):
    result = invoke(runner, "--version")
    assert result.exit_code == 0
    assert settings.VERSION in result.output


@pytest.mark.parametrize("args, code, verdict", [
    (["a->a"], 0, "PROVABLE"),
    (["b->a->b"], 1, "NOT_PROVABLE"),
    (["--calculus", "fr", "(a->a->b)->a->b"], 0, "PROVABLE"),
    (["a, a->b |- b"], 0, "PROVABLE"),
    (["a o b |- b o a"], 0, "PROVABLE"),
    (["--depth", "7", "b->a->b"], 1, "NOT_PROVABLE_WITHIN_DEPTH"),
])
def test_prove_verdicts(runner, args, code, verdict):
    result = invoke(runner, "prove", *args)
    assert result.exit_code == code
    assert result.output.splitlines()[0] == verdict


@pytest.mark.parametrize("args", [
    ["a->"],
    [],
    ["--depth", "3", "--calculus", "fr", "a->a"],
    ["--calculus", "fr", "a o b |- b o a"],
    ["--corpus", "missing.txt"],
])
def test_prove_usage_errors(runner, args):
    assert invoke(runner, "prove", *args).exit_code == 2


def test_prove_syntax_error_message(runner):
    result = invoke(runner, "prove", "a->")
    assert "error: syntax error at position 3" in result.output


def test_prove_budget_exhaustion(runner):
    result = invoke(runner, "prove", "--budget", "1", "a->a")
    assert result.exit_code == 3
    assert "exhausted" in result.output


def test_prove_json_envelope(runner):
    result = invoke(runner, "prove", "--format", "json", "(a->b)->a->b")
    payload = json.loads(result.output)
    assert payload["success"] is True
    assert payload["error"] is None
    assert payload["data"]["verdict"] == "PROVABLE"
    assert payload["data"]["goal"] == "|- (a->b)->a->b"
    assert payload["data"]["proof_nodes"] > 1


def test_json_error_envelope(runner):
    result = invoke(runner, "prove", "--format", "json", "a->")
    assert result.exit_code == 2
    payload = json.loads(result.output.splitlines()[0])
    assert payload["success"] is False
    assert payload["error"]["code"] == "SYNTAX_ERROR"
    assert payload["error"]["details"]["position"] == 3


@pytest.mark.parametrize("calculus, name", [("lr", "proof.txt"), ("fr", "proof.json")])
def test_emitted_proofs_check(runner, calculus, name):
    result = invoke(runner, "prove", "--calculus", calculus, "--emit-proof", name, "(a->b)->(b->a)->a->a")
    assert result.exit_code == 0
    assert Path(name).exists()
    result = invoke(runner, "check", "proof", name)
    assert result.exit_code == 0
    assert result.output.strip() == "VALID"


def test_check_reports_invalid_proof(runner):
    Path("bad.txt").write_text("ImpR b |- a->a\n  Id a, b |- a\n", encoding="utf-8")
    result = invoke(runner, "check", "proof", "bad.txt")
    assert result.exit_code == 1
    assert result.output.startswith("INVALID at [0]: Id:")


def test_check_malformed_proof_file(runner):
    Path("bad.txt").write_text("ImpR |- a->a\n   Id a |- a\n", encoding="utf-8")
    result = invoke(runner, "check", "proof", "bad.txt")
    assert result.exit_code == 2
    assert "line 2" in result.output


def test_prove_corpus(runner):
    Path("corpus.txt").write_text("# two goals\na->a\nb->a->b\n", encoding="utf-8")
    result = invoke(runner, "prove", "--corpus", "corpus.txt", "--jobs", "1")
    assert result.exit_code == 0
    assert result.output.splitlines() == ["PROVABLE\ta->a", "NOT_PROVABLE\tb->a->b"]


def test_prove_corpus_reports_errors(runner):
    Path("corpus.txt").write_text("a->a\n", encoding="utf-8")
    result = invoke(runner, "prove", "--corpus", "corpus.txt", "--jobs", "1", "--budget", "1")
    assert result.exit_code == 3
    assert result.output.startswith("ERROR\ta->a\t")


def test_solve_and_check_witness(runner, tiny_file):
    result = invoke(runner, "solve", "cover", tiny_file, "--cap", "1", "--emit-witness", "w.txt")
    assert result.exit_code == 0
    assert result.output.strip() == "WITNESS"
    assert Path("w.txt").read_text(encoding="utf-8") == "Unary#0 r (1)\n  Leaf leaf (0)\n"
    result = invoke(runner, "check", "witness", "w.txt", "--system", tiny_file)
    assert result.exit_code == 0
    assert result.output.strip() == "VALID"

    result = invoke(runner, "check", "witness", "w.txt", "--system", tiny_file, "--goal", "reach")
    assert result.exit_code == 1
    assert "is not zero" in result.output


def test_solve_negative_and_errors(runner, tiny_file):
    result = invoke(runner, "solve", "cover", tiny_file, "--cap", "0")
    assert result.exit_code == 1
    assert result.output.strip() == "NOT_FOUND_WITHIN_CAP"
    assert invoke(runner, "solve", "reach", tiny_file, "--cap", "3").exit_code == 1
    assert invoke(runner, "solve", "cover", tiny_file, "--budget", "1").exit_code == 3
    assert invoke(runner, "check", "witness", tiny_file).exit_code == 2


def test_solve_reach_modes(runner, duplication_file):
    result = invoke(runner, "solve", "reach", duplication_file, "--cap", "2", "--emit-witness", "w.json")
    assert result.exit_code == 0
    result = invoke(runner, "check", "witness", "w.json", "--system", duplication_file, "--goal", "reach")
    assert result.output.strip() == "VALID"
    result = invoke(runner, "check", "witness", "w.json", "--system", duplication_file, "--mode", "plain")
    assert result.exit_code == 1
    assert "expansion outside expansive mode" in result.output

    result = invoke(runner, "solve", "reach", duplication_file, "--cap", "2", "--mode", "plain")
    assert result.exit_code == 1
    result = invoke(runner, "solve", "--format", "json", "reach", duplication_file, "--cap", "2", "--mode", "comprehensive")
    assert json.loads(result.output)["data"]["verdict"] == "WITNESS"


def test_solve_bvas(runner, counting_file):
    result = invoke(runner, "solve", "cover", counting_file, "--cap", "3", "--emit-witness", "v.txt")
    assert result.exit_code == 0
    assert invoke(runner, "check", "witness", "v.txt", "--system", counting_file).exit_code == 0
    assert invoke(runner, "solve", "reach", counting_file).exit_code == 2


def test_bounds(runner, counting_file, tiny_file):
    result = invoke(runner, "bounds", counting_file, "--cap", "6")
    assert result.exit_code == 0
    assert result.output.splitlines() == ["L=7 H=117649 B=13841287201", "cap 6 is below B"]
    result = invoke(runner, "bounds", "--format", "json", tiny_file)
    data = json.loads(result.output)["data"]
    assert data["dimension"] == 7
    assert data["base"] == 6
    assert data["height"] is None


def test_translate_formula_to_bvass(runner):
    Path("goal.txt").write_text("a->a\n", encoding="utf-8")
    result = invoke(runner, "translate", "formula-to-bvass", "goal.txt", "goal.bvass")
    assert result.exit_code == 0
    assert result.output.strip() == "formula-to-bvass dimension=2 states=7 rules=9 root=f2 leaf=leaf"
    assert json.loads(labels_path(Path("goal.bvass")).read_text(encoding="utf-8"))["f2"] == "a->a"
    assert invoke(runner, "solve", "reach", "goal.bvass", "--cap", "2").exit_code == 0

    result = invoke(runner, "translate", "exp-to-cov", "goal.bvass", "goal.cov")
    assert result.exit_code == 0
    assert invoke(runner, "solve", "cover", "goal.cov", "--cap", "2").exit_code == 0

    Path("two.txt").write_text("a->a\nb->b\n", encoding="utf-8")
    assert invoke(runner, "translate", "formula-to-bvass", "two.txt", "two.bvass").exit_code == 2


def test_translate_to_formula(runner, tiny_file):
    assert invoke(runner, "translate", "cov-to-compr", tiny_file, "compr.bvass").exit_code == 0
    compr = read_instance(Path("compr.bvass"))
    assert compr.system.dimension == 5
    assert compr.root_state == "start"

    result = invoke(runner, "translate", "compr-to-formula", "compr.bvass", "formula.txt")
    assert result.exit_code == 0
    assert len(read_corpus(Path("formula.txt"))) == 1
    atoms = json.loads(labels_path(Path("formula.txt")).read_text(encoding="utf-8"))
    assert atoms["start"] == "start"
    assert atoms["e1"] == "coordinate 1"


def test_translate_between_bvass_and_bvas(runner, tiny_file, counting_file):
    result = invoke(runner, "translate", "bvass-to-bvas", tiny_file, "tiny.bvas")
    assert result.exit_code == 0
    sidecar = json.loads(labels_path(Path("tiny.bvas")).read_text(encoding="utf-8"))
    assert sidecar == {"r": "(0,2,0,0,0,0,0)", "leaf": "(1,1,0,0,0,0,0)"}
    assert invoke(runner, "solve", "cover", "tiny.bvas", "--cap", "2").exit_code == 0

    assert invoke(runner, "translate", "bvas-to-bvass", counting_file, "counting.bvass").exit_code == 0
    assert not read_instance(Path("counting.bvass")).system.ordinary
    assert invoke(runner, "solve", "cover", "counting.bvass", "--cap", "3").exit_code == 0

    assert invoke(runner, "translate", "bvas-to-bvass", tiny_file, "x.bvass").exit_code == 2


def test_translate_to_ordinary(runner):
    Path("general.bvass").write_text("dim 2\nroot q\nleaf p\nunary q (-1,-1) p\n", encoding="utf-8")
    result = invoke(runner, "translate", "to-ordinary", "general.bvass", "ordinary.bvass")
    assert result.exit_code == 0
    inst = read_instance(Path("ordinary.bvass"))
    assert inst.system.ordinary
    assert inst.system.states == ("q", "p", "q~0~1")
    assert invoke(runner, "solve", "cover", "ordinary.bvass", "--cap", "1").exit_code == 0


def test_roundtrip(runner, tiny_file):
    result = invoke(runner, "roundtrip", tiny_file, "--cap", "6")
    assert result.exit_code == 0
    assert result.output.strip() == "AGREE cover=YES formula=PROVABLE"


def test_roundtrip_below_the_needed_cap_is_undecided(runner, tiny_file):
    result = invoke(runner, "roundtrip", tiny_file, "--cap", "0")
    assert result.exit_code == 0
    assert result.output.strip() == "UNDECIDED cover=NO formula=PROVABLE"


def test_roundtrip_reports_an_exhausted_budget(runner, tiny_file):
    assert invoke(runner, "roundtrip", tiny_file, "--budget", "1").exit_code == 3


def test_roundtrip_rejects_comprehensive_instances(runner, tiny_file):
    assert invoke(runner, "translate", "cov-to-compr", tiny_file, "compr.bvass").exit_code == 0
    assert invoke(runner, "roundtrip", "compr.bvass").exit_code == 2
    assert invoke(runner, "roundtrip").exit_code == 2


def test_roundtrip_batch_tolerates_exhausted_budgets(runner):
    result = invoke(runner, "roundtrip", "--random", "3", "--seed", "3", "--cap", "2", "--budget", "1")
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert len(lines) == 4
    assert re.fullmatch(r"agree \d/3 undecided \d disagree 0", lines[-1])
    assert any(line.endswith("formula=UNKNOWN") for line in lines)


@pytest.mark.slow
def test_roundtrip_on_random_instances(runner):
    result = invoke(runner, "roundtrip", "--random", "100", "--seed", "3", "--cap", "4", "--budget", "20000")
    summary = result.output.splitlines()[-1]
    assert summary.startswith("agree ")
    assert summary.endswith(" disagree 0")
    assert result.exit_code == 0
