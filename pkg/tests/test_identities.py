import pytest

from chazy_lab.curves import identities as I


@pytest.fixture(scope="module")
def report():
    return I.identity_checks(seed=3, samples=32)


def test_all_identities_hold(report):
    assert report.passed, [(c.check, c.max) for c in report.checks if not c.passed]
    assert all(c.samples >= 32 for c in report.checks)


@pytest.mark.parametrize("name", [
    "c1/I-relation", "ssi/L-tau", "IJ/argument-scaling", "IK/argument-scaling",
    "LN/argument-scaling", "LM/argument-scaling",
    "c1/constant", "c2/constant", "c3/constant", "c4/constant",
])
def test_named_identity_present(report, name):
    assert report.check(name).passed


def test_measured_constants_reported(report):
    values = {n.split(" = ")[0]: complex(n.split(" = ")[1].replace("i", "j")) for n in report.notes}
    assert values["c1^2"] == pytest.approx(0.25, abs=1e-10)
    assert values["c2^2"] == pytest.approx(256, rel=1e-10)
    assert values["c3^2"] == pytest.approx(4096, rel=1e-10)
    assert values["c4^2"] == pytest.approx(1 / 64, rel=1e-10)


def test_deformations_hold(report):
    for name in ("lll/(K-1)/sqrt(K)", "lll/K/sqrt(K-1)", "lll/1/sqrt(K(K-1))"):
        assert report.check(name).max < 1e-8


def test_printed_forms_fail():
    rep = I.printed_form_checks(seed=3, samples=16)
    assert not rep.check("c1/printed-J-form/constant").passed
    assert rep.check("c1/printed-J-form/constant").max > 1e-2


def test_determinism():
    a = I.identity_checks(seed=1, samples=4)
    b = I.identity_checks(seed=1, samples=4)
    assert [c.values for c in a.checks] == [c.values for c in b.checks]
