import typing as t
from pathlib import Path

import pytest
from pytest_mock import MockFixture

from latcom.errors import UnknownSuite
from latcom.verify import SUITES, SuiteResult, Verifier


def _failures(results: t.List[SuiteResult]) -> t.List[t.Dict[str, t.Any]]:
    return [failure for result in results for failure in result.to_dict()["failures"]]


@pytest.mark.verify
class TestVerifier:
    @pytest.mark.parametrize("suite", ["cor32", "thm23", "density", "multiplicativity", "prop31"])
    def test_suite_passes(self, suite: str) -> None:
        results = Verifier(quiet=True, membership_bound=1000).run(suite)
        assert [result.suite for result in results] == [suite]
        assert _failures(results) == []
        assert all(case.status == "pass" for case in results[0].cases)

    @pytest.mark.slow
    @pytest.mark.parametrize("suite", ["thm24", "thm33", "eq2", "properties"])
    def test_slow_suite_passes(self, suite: str, order_cap: int) -> None:
        results = Verifier(quiet=True, membership_bound=1000, order_cap=order_cap).run(suite)
        assert _failures(results) == []

    def test_unknown_suite(self) -> None:
        with pytest.raises(UnknownSuite):
            Verifier(quiet=True).run("thm99")

    def test_order_cap_skips_cases(self) -> None:
        results = Verifier(quiet=True, order_cap=64).run("cor32")
        cases = results[0].cases
        assert results[0].passed
        skipped = [case for case in cases if case.status == "skip"]
        assert skipped
        assert all("exceeds the order cap 64" in case.detail for case in skipped)
        assert results[0].to_dict()["skipped"] == len(skipped)

    def test_type2_note(self) -> None:
        note = Verifier(quiet=True)._type2_exception_note()  # pylint: disable=W0212
        assert note.status == "pass"
        assert note.detail == "|Im f| = 5, not 4"

    def test_quaternion32_note(self) -> None:
        note = Verifier(quiet=True)._quaternion32_image_note()  # pylint: disable=W0212
        assert note.status == "pass"
        assert note.detail == "|Im f| = 5, not 4"

    def test_cor32_reports_quaternion32_note(self) -> None:
        cases = {case.name: case for case in Verifier(quiet=True).run("cor32")[0].cases}
        assert cases["Q(32) |Im f|"].detail == "|Im f| = 5, not 4"
        assert "Q(32) imf_size" not in cases

    def test_discrepancies_are_reported(self, mocker: MockFixture) -> None:
        mocker.patch("latcom.analytic.sd_formula_T21", return_value=mocker.MagicMock(sd_rel_top=0, sd_G=0))
        results = Verifier(quiet=True).run("thm23")
        failures = _failures(results)
        assert failures
        discrepancy = failures[0]["discrepancies"][0]
        assert discrepancy["formula"] == "T21"
        assert discrepancy["quantity"] == "sd_rel_top"
        assert discrepancy["formula_value"] == 0

    def test_log_file(self, tmp_path: Path) -> None:
        log_file = tmp_path / "verify.log"
        Verifier(quiet=True, log_file=str(log_file)).run("density")
        text = log_file.read_text(encoding="utf-8")
        assert "Running suite density" in text
        assert "Suite density: 6 cases, 0 failed" in text

    def test_every_suite_is_registered(self) -> None:
        assert all(callable(getattr(Verifier, f"_suite_{name}")) for name in SUITES)
