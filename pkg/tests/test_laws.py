import json

import numpy as np
import pytest

from twotime import laws
from twotime import quantum as qm
from twotime.errors import CarrierTooLarge, UnknownLaw
from twotime.laws import LAWS, MUTATIONS, bracket, convex_via_bracket, run_laws, run_mutation

H = qm.unitary_channel(qm.GATE_MATRICES["H"])
X = qm.unitary_channel(qm.GATE_MATRICES["X"])

# cheap suites, so the whole registry is exercised without the exhaustive biset sweep
FAST = [n for n in LAWS if n != "biset_monad"]


@pytest.mark.parametrize("name", FAST)
def test_law_passes_with_default_seed(name):
    reports = run_laws([name])
    assert reports
    for r in reports:
        assert r.passed, r.line()
        assert r.counterexample is None
        assert r.max_deviation <= r.tolerance


def test_biset_monad_on_tiny_carriers_is_exact():
    r = laws.check_biset_monad(max_carrier=1)
    assert r.passed and r.max_deviation == 0 and r.instances > 0


def test_biset_carrier_limit():
    with pytest.raises(CarrierTooLarge):
        laws.check_biset_monad(max_carrier=5)


def test_bracket_endpoints():
    assert bracket(1, 0).close(qm.inj1(), 0)
    assert bracket(0, 1).close(qm.inj2(), 0)
    np.testing.assert_allclose(bracket(0.25, 0.75).mat.ravel(), [0.25, 0.75])


def test_composite_through_bracket_on_h_and_x():
    direct = qm.convex_sum([0.5, 0.5], [H, X])
    assert convex_via_bracket(0.5, 0.5, H, X).distance(direct) <= 1e-12
    assert convex_via_bracket(1.0, 0.0, H, X).distance(H) <= 1e-12


@pytest.mark.parametrize("name", ["convex_axioms", "kleisli_bilinearity", "exec_invariants"])
def test_reports_are_reproducible(name):
    a = json.dumps([r.to_json() for r in run_laws([name], seed=11)])
    b = json.dumps([r.to_json() for r in run_laws([name], seed=11)])
    assert a == b


def test_report_line_format():
    r = laws.check_dynlift_triangle()
    assert r.line().startswith("PASS dynlift_triangle: ")
    assert "tolerance" in r.line()


@pytest.mark.parametrize("mutation", sorted(MUTATIONS))
def test_every_mutation_breaks_its_law(mutation):
    reports = run_mutation(mutation)
    failed = [r for r in reports if not r.passed]
    assert failed, [r.line() for r in reports]
    assert all(r.counterexample for r in failed)
    assert failed[0].line().startswith("FAIL ")


def test_unknown_names():
    with pytest.raises(UnknownLaw):
        run_laws(["nope"])
    with pytest.raises(UnknownLaw):
        run_mutation("nope")
