import typing as t
from pathlib import Path

import pytest
from pytest_mock import MockFixture

from latcom import __version__ as package_version
from latcom.errors import JobCapExceeded, SpecParseError
from latcom.json_utils import dumps, loads
from latcom.scanner import (
    DEFAULT_OUTPUTS,
    ParameterRange,
    ResultCache,
    ScanJob,
    Scanner,
    compute_document,
    evaluate,
    parse_range,
    render,
)


class TestParseRange:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("n=2..5", ParameterRange("n", (2, 3, 4, 5))),
            ("n = 2..10:4", ParameterRange("n", (2, 6, 10))),
            ("q=5,7,11", ParameterRange("q", (5, 7, 11))),
            ("k=3", ParameterRange("k", (3,))),
        ],
    )
    def test_parse_range(self, text: str, expected: ParameterRange) -> None:
        assert parse_range(text) == expected

    @pytest.mark.parametrize("text", ["n", "=2..5", "n=5..2", "n=2..5:0", "n=a,b", "2=1..3"])
    def test_invalid_range(self, text: str) -> None:
        with pytest.raises(SpecParseError):
            parse_range(text)


class TestTemplates:
    @pytest.mark.parametrize(
        "expression,env,expected",
        [
            ("2n", {"n": 3}, 6),
            ("2 n", {"n": 3}, 6),
            ("n**2+1", {"n": 4}, 17),
            ("2*n-1", {"n": 5}, 9),
            ("2^n", {"n": 3}, None),
            ("q*p", {"p": 3, "q": 5}, 15),
            ("(n+1)//2", {"n": 6}, 3),
            ("-n", {"n": 2}, -2),
        ],
    )
    def test_evaluate(self, expression: str, env: t.Dict[str, int], expected: t.Optional[int]) -> None:
        if expected is None:
            with pytest.raises(SpecParseError):
                evaluate(expression, env)
        else:
            assert evaluate(expression, env) == expected

    @pytest.mark.parametrize(
        "expression",
        [
            "m",
            "n**100",
            "__import__('os')",
            "n.real",
            "1.5",
            "n +",
        ],
    )
    def test_evaluate_rejects(self, expression: str) -> None:
        with pytest.raises(SpecParseError):
            evaluate(expression, {"n": 2})

    @pytest.mark.parametrize(
        "template,env,expected",
        [
            ("D(2n)", {"n": 3}, "D(6)"),
            ("prod(D(2n),Z(q))", {"n": 3, "q": 5}, "prod(D(6),Z(5))"),
            ("T21(p,3,1)", {"p": 7}, "T21(7,3,1)"),
            ("prod(A4,Z(n))", {"n": 5}, "prod(A4,Z(5))"),
            ("Q(2**n)", {"n": 4}, "Q(16)"),
        ],
    )
    def test_render(self, template: str, env: t.Dict[str, int], expected: str) -> None:
        assert render(template, env) == expected


class TestScanJob:
    def test_size_and_combinations(self) -> None:
        job = ScanJob("T21(p,q,1)", (ParameterRange("p", (7, 13)), ParameterRange("q", (2, 3))))
        assert job.size == 4
        assert list(job.combinations()) == [
            {"p": 7, "q": 2},
            {"p": 7, "q": 3},
            {"p": 13, "q": 2},
            {"p": 13, "q": 3},
        ]
        assert job.outputs == DEFAULT_OUTPUTS

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"ranges": (ParameterRange("n", (1,)), ParameterRange("n", (2,)))},
            {"ranges": (ParameterRange("n", (1,)),), "outputs": ("bogus",)},
            {"ranges": (ParameterRange("n", (1,)),), "fmt": "xml"},
        ],
    )
    def test_invalid_job(self, kwargs: t.Dict[str, t.Any]) -> None:
        with pytest.raises(SpecParseError):
            ScanJob(template="Z(n)", **kwargs)


class TestScanner:
    def test_run(self) -> None:
        scanner = Scanner(quiet=True)
        result = scanner.run(scanner.job("D(2n)", [parse_range("n=2..4")]))
        assert [row.spec for row in result.rows] == ["D(4)", "D(6)", "D(8)"]
        assert result.skipped == ()
        document = loads(result.render())
        assert document["outputs"] == list(DEFAULT_OUTPUTS)
        assert document["ranges"] == {"n": [2, 3, 4]}
        assert document["rows"][1]["params"] == {"n": 3}
        assert document["rows"][1]["sd"]["num"] == "5"
        assert document["rows"][1]["sd"]["den"] == "6"
        assert document["rows"][2]["gamma"] == 2

    def test_csv(self) -> None:
        scanner = Scanner(quiet=True, outputs=["sd", "imf_size"])
        result = scanner.run(scanner.job("D(2n)", [parse_range("n=2..4")], fmt="csv"))
        assert result.render() == "n,spec,sd,imf_size\n2,D(4),1/1,1\n3,D(6),5/6,2\n4,D(8),23/25,3"

    def test_table(self) -> None:
        scanner = Scanner(quiet=True, outputs=["order"])
        output = scanner.run(scanner.job("Z(n)", [parse_range("n=2..3")])).render("table")
        assert output.startswith("|")
        assert "Z(3)" in output

    def test_rows_sorted_by_parameters(self) -> None:
        scanner = Scanner(quiet=True, outputs=["order"])
        result = scanner.run(scanner.job("Z(n)", [parse_range("n=5,3,4")]))
        assert [row.spec for row in result.rows] == ["Z(3)", "Z(4)", "Z(5)"]

    @pytest.mark.parametrize(
        "template,values,order_cap,accepted,reason",
        [
            ("Q(n)", "n=8,12,16", None, ["Q(8)", "Q(16)"], "power of two"),
            ("D(2n)", "n=2..4", 7, ["D(4)", "D(6)"], "order 8 exceeds the order cap 7"),
            ("T21(p,3,1)", "p=7,8", None, ["T21(7,3,1)"], "p = 8 must be prime"),
            ("Z(12//n)", "n=0,1", None, ["Z(12)"], "division by zero"),
            ("D(2n)", "n=0,1", None, ["D(2)"], "even group order"),
        ],
    )
    def test_skipped(
        self, template: str, values: str, order_cap: t.Optional[int], accepted: t.List[str], reason: str
    ) -> None:
        scanner = Scanner(quiet=True, order_cap=order_cap, outputs=["order"])
        result = scanner.run(scanner.job(template, [parse_range(values)]))
        assert [row.spec for row in result.rows] == accepted
        assert len(result.skipped) == 1
        assert reason in result.skipped[0].reason
        assert loads(result.render())["skipped"][0]["reason"] == result.skipped[0].reason

    def test_job_cap(self) -> None:
        scanner = Scanner(quiet=True, job_cap=2)
        with pytest.raises(JobCapExceeded) as excinfo:
            scanner.run(scanner.job("D(2n)", [parse_range("n=2..4")]))
        assert excinfo.value.size == 3
        assert excinfo.value.cap == 2

    def test_invalid_jobs(self) -> None:
        with pytest.raises(ValueError):
            Scanner(quiet=True, jobs=-1)

    def test_worker_pool(self, mocker: MockFixture) -> None:
        pool = mocker.MagicMock()
        pool.__enter__.return_value = pool
        pool.map.side_effect = map
        executor = mocker.patch("latcom.scanner.ProcessPoolExecutor", return_value=pool)
        scanner = Scanner(quiet=True, jobs=2, outputs=["order"])
        result = scanner.run(scanner.job("Z(n)", [parse_range("n=2..4")]))
        executor.assert_called_once_with(max_workers=2)
        assert [row.document["order"] for row in result.rows] == [2, 3, 4]


class TestResultCache:
    def test_reuses_records(self, tmp_path: Path) -> None:
        cache = tmp_path / "scan.jsonl"
        scanner = Scanner(quiet=True, cache=str(cache))
        first = scanner.run(scanner.job("D(2n)", [parse_range("n=2..4")]))
        assert not any(row.cached for row in first.rows)
        assert len(cache.read_text(encoding="utf-8").splitlines()) == 3

        second = scanner.run(scanner.job("D(2n)", [parse_range("n=2..5")]))
        assert [row.cached for row in second.rows] == [True, True, True, False]
        assert second.rows[1].document == first.rows[1].document
        assert len(cache.read_text(encoding="utf-8").splitlines()) == 4

    def test_other_versions_are_ignored(self, tmp_path: Path) -> None:
        cache = tmp_path / "scan.jsonl"
        ResultCache(cache).append({"Z(2)": compute_document("Z(2)", 100)})
        with cache.open("a", encoding="utf-8") as handle:
            handle.write("not json\n")
            handle.write(dumps({"spec": "Z(3)", "version": "not a version", "report": {}}, compact=True) + "\n")
        assert list(ResultCache(cache).load()) == ["Z(2)"]
        assert ResultCache(cache, tag="0.0.1").load() == {}
        assert ResultCache(tmp_path / "missing.jsonl").load() == {}

    def test_audit(self, tmp_path: Path) -> None:
        cache = tmp_path / "scan.jsonl"
        scanner = Scanner(quiet=True, cache=str(cache))
        scanner.run(scanner.job("D(2n)", [parse_range("n=2..4")]))
        assert scanner.audit(cache) == []

        with cache.open("a", encoding="utf-8") as handle:
            record = {"spec": "D(6)", "version": package_version, "report": {"label": "D(6)"}}
            handle.write(dumps(record, compact=True) + "\n")
        assert scanner.audit(cache) == ["D(6)"]
