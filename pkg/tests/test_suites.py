import json

import pytest

from koopseq.errors import ConfigError
from koopseq.report import SuiteConfig, VerificationReport
from koopseq.suites import SUITES, run_suite

EXPECTED_FAILURES = {
    "chen.Rp.range_r_to_1",
    "cont.factorization.Rp_reversed",
    "cont.factorization.Sp_reversed",
    "poisson.exponential_image_exponent_n",
    "specfun.beta1.first_column_shifted_factorial",
    "specfun.beta1_closed_forms",
    "variation_of_parameters.S.row0_identity_variant",
}


@pytest.fixture(scope="module", params=SUITES)
def suite(request):
    return request.param, run_suite(request.param, SuiteConfig())


def test_suite_has_no_unexpected_failures(suite):
    name, reports = suite
    assert reports
    bad = [r.summary_line() for r in reports if not r.ok]
    assert not bad, bad


def test_suite_order_is_stable(suite):
    _, reports = suite
    keys = [(r.identity_id, json.dumps(r.to_dict()["params"], sort_keys=True)) for r in reports]
    assert keys == sorted(keys)


def test_expected_failures_really_fail(suite):
    _, reports = suite
    for r in reports:
        if r.expected_failure:
            assert r.identity_id in EXPECTED_FAILURES
            assert not r.passed and r.note


def test_all_expected_failures_are_reported():
    ids = {r.identity_id for name in ("specfun", "poisson", "semigroups", "cesaro")
           for r in run_suite(name, SuiteConfig()) if r.expected_failure}
    assert ids == EXPECTED_FAILURES


def test_seed_changes_inputs_not_outcome():
    a = run_suite("resolvent", SuiteConfig(seed=5))
    b = run_suite("resolvent", SuiteConfig(seed=5))
    c = run_suite("resolvent", SuiteConfig(seed=6))
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    assert [r.residual for r in a] != [r.residual for r in c]
    assert all(r.ok for r in c)


def test_unknown_suite():
    with pytest.raises(ConfigError):
        run_suite("nope", SuiteConfig())


@pytest.mark.parametrize("bad", [
    '{"trunc_len": 4}', '{"p_values": [0.5]}', '{"t_values": [-1]}', '{"tol": 0}',
    '{"quadrature_order": 2}', '{"extra": 1}', '[1, 2]', '{oops',
])
def test_config_validation(bad):
    with pytest.raises(ConfigError):
        SuiteConfig.from_json(bad).validate()


def test_config_roundtrip():
    cfg = SuiteConfig.from_json('{"trunc_len": 32, "p_values": [1, "inf"], "seed": 3}').validate()
    assert cfg.trunc_len == 32 and cfg.p_values[1] == float("inf") and cfg.seed == 3


def test_report_json_shape():
    r = VerificationReport("x.y", {"p": float("inf"), "lam": 1 + 2j}, 1e-3, 1e-8, False, 12.5,
                           expected_failure=True, note="n")
    d = json.loads(r.to_json())
    assert d["params"] == {"p": "inf", "lam": [1.0, 2.0]} and d["pass"] is False and "runtime_ms" not in d
    assert json.loads(r.to_json(timings=True))["runtime_ms"] == 12.5
    assert r.ok and r.summary_line().startswith("XFAIL")
