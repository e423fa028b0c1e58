import pytest

from app.core.config import settings
from app.core.exceptions import ResourceLimitError, UnsupportedConnectiveError
from app.models.enums import LrRule, Verdict
from app.models.formula import Atom, Imp
from app.models.proof import LrProof
from app.models.sequent import FocusSequent, Sequent
from app.services.corpus import enumerate_formulas
from app.services.fr_prover import check_fr_proof, compositions, fr_prove
from app.services.lr_prover import check_lr_proof, lr_prove, lr_prove_bounded
from app.services.syntax import parse_focus_sequent, parse_formula, parse_sequent

a, b = Atom("a"), Atom("b")

KNOWN = [
    ("a->a", Verdict.PROVABLE),
    ("b->a->b", Verdict.NOT_PROVABLE),
    ("(a->a->b)->a->b", Verdict.PROVABLE),
    ("((a->b)->a)->a", Verdict.NOT_PROVABLE),
    ("a->a->a", Verdict.NOT_PROVABLE),
    ("(a->b)->(b->a)->a->a", Verdict.PROVABLE),
    ("(a->b)->(a->a->b)", Verdict.NOT_PROVABLE),
]


def theorem(text: str) -> Sequent:
    return Sequent((), parse_formula(text))


@pytest.mark.parametrize("text, verdict", KNOWN)
def test_lr_known_verdicts(text, verdict):
    result = lr_prove(theorem(text))
    assert result.verdict == verdict
    if result:
        assert check_lr_proof(result.proof)
        assert result.proof.conclusion == theorem(text)
        assert result.height == result.proof.height()


@pytest.mark.parametrize("text, verdict", KNOWN)
def test_fr_known_verdicts(text, verdict):
    s = parse_formula(text)
    result = fr_prove(FocusSequent((), None, s))
    assert result.verdict == verdict
    if result:
        assert check_fr_proof(result.proof)
        assert result.proof.conclusion == FocusSequent((), None, s)


@pytest.mark.parametrize("text, expected", [
    ("a->a", Verdict.PROVABLE),
    ("(a->a->b)->a->b", Verdict.PROVABLE),
    ("b->a->b", Verdict.NOT_PROVABLE_WITHIN_DEPTH),
    ("((a->b)->a)->a", Verdict.NOT_PROVABLE_WITHIN_DEPTH),
    ("a->a->a", Verdict.NOT_PROVABLE_WITHIN_DEPTH),
])
def test_bounded_oracle(text, expected):
    result = lr_prove_bounded(theorem(text), 7)
    assert result.verdict == expected
    if result:
        assert check_lr_proof(result.proof)
        assert result.height <= 7


@pytest.mark.slow
@pytest.mark.parametrize("text", ["b->a->b", "((a->b)->a)->a", "a->a->a"])
def test_bounded_oracle_full_depth(text):
    assert lr_prove_bounded(theorem(text), 14).verdict == Verdict.NOT_PROVABLE_WITHIN_DEPTH


@pytest.mark.parametrize("text, verdict", [
    ("a o b |- b o a", Verdict.PROVABLE),
    ("|- T", Verdict.PROVABLE),
    ("a |- T", Verdict.NOT_PROVABLE),
    ("T, a |- a", Verdict.PROVABLE),
    ("a->b, a |- b", Verdict.PROVABLE),
    ("a, b |- a", Verdict.NOT_PROVABLE),
])
def test_lr_sequents_and_multiplicatives(text, verdict):
    result = lr_prove(parse_sequent(text))
    assert result.verdict == verdict
    if result:
        assert check_lr_proof(result.proof)


def test_fr_rejects_multiplicatives():
    with pytest.raises(UnsupportedConnectiveError):
        fr_prove(FocusSequent((), None, parse_formula("a o b -> b o a")))


def test_fr_focused_goal():
    assert fr_prove(parse_focus_sequent("b, [b->a] |- a")).verdict == Verdict.PROVABLE
    assert fr_prove(parse_focus_sequent("a, a->b, [b->a] |- a")).verdict == Verdict.PROVABLE
    assert fr_prove(parse_focus_sequent("b, b, [b->a] |- a")).verdict == Verdict.NOT_PROVABLE
    assert fr_prove(parse_focus_sequent("a, [b->a] |- a")).verdict == Verdict.NOT_PROVABLE


def test_budget_exhaustion():
    with pytest.raises(ResourceLimitError) as info:
        lr_prove(theorem("a->a"), budget=1)
    assert info.value.exit_status == 3


def test_checker_reports_first_bad_node():
    weakened = LrProof(LrRule.ID, Sequent((a, b), a), (), a)
    report = check_lr_proof(weakened)
    assert not report
    assert report.path == []
    assert report.message.startswith("Id:")

    nested = LrProof(LrRule.IMP_R, Sequent((b,), Imp(a, a)), (weakened,), Imp(a, a))
    report = check_lr_proof(nested)
    assert not report and report.path == [0]


def test_compositions():
    assert sorted(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(compositions(0, 3)) == [(0, 0, 0)]


def test_calculi_agree_on_small_corpus():
    for f in enumerate_formulas(max_size=7):
        lr = lr_prove(Sequent((), f))
        fr = fr_prove(FocusSequent((), None, f))
        assert lr.verdict == fr.verdict, f


@pytest.mark.slow
def test_calculi_agree_up_to_size_nine():
    disagreements = []
    for f in enumerate_formulas(max_size=9):
        lr = lr_prove(Sequent((), f))
        fr = fr_prove(FocusSequent((), None, f))
        if lr.verdict != fr.verdict:
            disagreements.append(f)
        if fr:
            assert check_fr_proof(fr.proof)
    assert disagreements == []


def test_unusable_hypothesis_fails_without_search():
    # b is never a goal, so the hypothesis (a->a)->a->b cannot be used up
    s = theorem("((a->a)->a->b)->a")
    assert lr_prove(s, budget=5).verdict == Verdict.NOT_PROVABLE
    assert fr_prove(FocusSequent((), None, s.succedent), budget=5).verdict == Verdict.NOT_PROVABLE


def test_bounded_depth_defaults_to_settings(monkeypatch):
    # a->(a->b)->b needs a proof of height 4
    monkeypatch.setattr(settings, "BOUNDED_DEPTH", 3)
    assert lr_prove_bounded(theorem("a->(a->b)->b")).verdict == Verdict.NOT_PROVABLE_WITHIN_DEPTH
    monkeypatch.setattr(settings, "BOUNDED_DEPTH", 4)
    assert lr_prove_bounded(theorem("a->(a->b)->b")).verdict == Verdict.PROVABLE


def test_oracle_agrees_on_small_corpus():
    for f in enumerate_formulas(max_size=7):
        decided = lr_prove(Sequent((), f))
        bounded = lr_prove_bounded(Sequent((), f), 6)
        assert decided.verdict.positive == bounded.verdict.positive, f


@pytest.mark.slow
def test_oracle_agrees_up_to_size_nine():
    for f in enumerate_formulas(max_size=9):
        decided = lr_prove(Sequent((), f)).verdict.positive
        at_depth = lr_prove_bounded(Sequent((), f), settings.BOUNDED_DEPTH).verdict.positive
        deeper = lr_prove_bounded(Sequent((), f), settings.BOUNDED_DEPTH + 2).verdict.positive
        assert decided == at_depth == deeper, f
