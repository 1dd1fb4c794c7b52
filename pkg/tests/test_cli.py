"""
End-to-end tests for the addlab command line.
"""

import csv
import io
from pathlib import Path

import jsonschema
import orjson
import pytest

from addlab.cli import build_parser, parse_complex_list, parse_float_grid, parse_int_grid, run

FAST = ["--restarts", "3", "--max-iters", "40"]
SCHEMA_PATH = Path(__file__).resolve().parents[1] / "docs" / "schema.json"


def _invoke(capsys, *argv: str) -> tuple[int, dict]:
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, orjson.loads(out)


def test_cli_import_main():
    import addlab.__main__ as m

    assert callable(getattr(m, "main", None))


class TestGridParsers:
    def test_int_ranges_and_lists(self):
        assert parse_int_grid("4-6,9") == [4, 5, 6, 9]
        assert parse_int_grid("4-12") == list(range(4, 13))
        assert parse_int_grid(",") == []

    def test_float_grid(self):
        assert parse_float_grid("2.5, 3,4") == [2.5, 3.0, 4.0]

    def test_complex_list(self):
        assert parse_complex_list("0,0.5,1+1j") == [(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)]

    def test_invalid_grid_exits(self):
        with pytest.raises(SystemExit) as exc_info:
            build_parser().parse_args(["scan", "--family", "antisym", "--p-grid", "x", "--d-grid", "4"])

        assert exc_info.value.code == 2


@pytest.mark.integration
class TestConstruct:
    """Test the construct command."""

    @pytest.mark.parametrize(
        "flags,dimension",
        [
            (["--family", "antisym", "--d", "4"], 6),
            (["--family", "parthasarathy", "--d", "3"], 4),
            (["--family", "bell-extension", "--d", "6", "--n", "2"], 17),
        ],
    )
    def test_dimensions(self, capsys, flags, dimension):
        code, data = _invoke(capsys, "construct", *flags, *FAST)

        assert code == 0
        assert data["payload_type"] == "construction"
        assert data["payload"]["dimension"] == dimension
        assert data["payload"]["orthonormality_residual"] < 1e-10

    def test_parthasarathy_reports_both_spaces(self, capsys):
        _, data = _invoke(capsys, "construct", "--family", "parthasarathy", "--d", "4", *FAST)

        assert data["payload"]["dimension"] == 9
        assert data["payload"]["dimension_L"] == 7

    def test_antisymmetric_max_schmidt(self, capsys):
        _, data = _invoke(capsys, "construct", "--family", "antisym", "--d", "4", *FAST)

        assert data["payload"]["max_schmidt"]["value"] == pytest.approx(0.5, abs=1e-6)

    def test_invalid_n_is_an_error(self, capsys):
        code, data = _invoke(capsys, "construct", "--family", "antisym-subspace", "--d", "4", "--n", "9")

        assert code == 2
        assert data["payload_type"] == "error"
        assert data["payload"]["code"] == "ARGUMENT_ERROR"

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "runs" / "construct.json"
        code = run(["construct", "--family", "antisym", "--d", "3", *FAST, "--output", str(target)])

        assert code == 0
        assert capsys.readouterr().out == ""
        assert orjson.loads(target.read_bytes())["payload"]["dimension"] == 3

    def test_relative_output_uses_output_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("ADDLAB_OUTPUT_DIR", str(tmp_path / "results"))
        code = run(["construct", "--family", "antisym", "--d", "3", *FAST, "--output", "runs/construct.json"])

        assert code == 0
        assert capsys.readouterr().out == ""
        data = orjson.loads((tmp_path / "results" / "runs" / "construct.json").read_bytes())
        assert data["payload_type"] == "construction"


@pytest.mark.integration
class TestVerify:
    """Test the verify command and its exit codes."""

    def test_breaking_subspace(self, capsys):
        spec = ["--family", "antisym-subspace", "--d", "8", "--n", "26"]
        code, data = _invoke(capsys, "verify", *spec, "--p", "3", *FAST)

        assert code == 0
        assert data["payload_type"] == "witness_report"
        assert data["payload"]["analytic"]["breaks"] is True
        assert data["payload"]["violation_certified"] is True

    def test_non_breaking_subspace(self, capsys):
        spec = ["--family", "antisym-subspace", "--d", "8", "--n", "25"]
        code, data = _invoke(capsys, "verify", *spec, "--p", "3", *FAST)

        assert code == 3
        assert data["payload"]["analytic"]["breaks"] is False

    def test_parthasarathy_d2(self, capsys):
        code, data = _invoke(capsys, "verify", "--family", "parthasarathy", "--d", "2", "--p", "3", "--m", "0.5", *FAST)

        assert code == 3
        assert data["payload"]["analytic"]["C"] == pytest.approx(1.0)
        assert data["payload"]["analytic"]["c"] == pytest.approx(3.0)

    def test_parthasarathy_assumed_m_is_not_certified(self, capsys):
        """The analytic chain breaks at d = 4 with m = ½, but the oracle puts M_4 far below ½."""
        argv = ["verify", "--family", "parthasarathy", "--d", "4", "--p", "3", "--m", "0.5", *FAST]
        code, data = _invoke(capsys, *argv)

        assert code == 0
        assert data["payload"]["analytic"]["breaks"] is True
        assert data["payload"]["certification"] == "none"
        assert data["payload"]["violation_certified"] is False
        assert data["payload"]["m_source"] == "argument"

    def test_m_requires_parthasarathy(self, capsys):
        code, data = _invoke(capsys, "verify", "--family", "antisym", "--d", "4", "--p", "3", "--m", "0.5", *FAST)

        assert code == 2
        assert data["payload"]["code"] == "USAGE_ERROR"

    def test_invalid_order(self, capsys):
        code, data = _invoke(capsys, "verify", "--family", "antisym", "--d", "4", "--p", "1", *FAST)

        assert code == 2
        assert data["payload"]["code"] == "ARGUMENT_ERROR"


@pytest.mark.integration
class TestScan:
    """Test the scan command."""

    def _rows(self, text: str) -> list[dict]:
        body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
        return list(csv.DictReader(io.StringIO(body)))

    def test_extension_csv(self, capsys):
        code = run(["scan", "--family", "extension", "--p-grid", "3", "--d-grid", "4-12"])
        rows = self._rows(capsys.readouterr().out)

        assert code == 0
        assert len(rows) == 9
        assert list(rows[0]) == ["family", "p", "d", "member", "n_or_x0", "C", "c", "margin"]
        assert next(row["d"] for row in rows if row["member"] == "true") == "8"

    def test_subspace_metadata(self, capsys):
        run(["scan", "--family", "subspace", "--p-grid", "3", "--d-grid", "4-12"])
        text = capsys.readouterr().out

        assert "# d0[p=3]=7" in text.splitlines()

    def test_row_count(self, capsys):
        run(["scan", "--family", "antisym", "--p-grid", "2,3,4", "--d-grid", "3,5,7,9"])

        assert len(self._rows(capsys.readouterr().out)) == 12

    def test_p2_is_inconclusive(self, capsys):
        run(["scan", "--family", "extension", "--p-grid", "2", "--d-grid", "3-12"])
        rows = self._rows(capsys.readouterr().out)

        assert {row["member"] for row in rows} == {"inconclusive"}

    def test_json_format(self, capsys):
        code, data = _invoke(
            capsys, "scan", "--family", "parthasarathy", "--p-grid", "3", "--d-grid", "2-6", "--format", "json"
        )

        assert code == 0
        assert data["payload_type"] == "region_scan"
        assert data["payload"]["metadata"]["d0[p=3]"] == 3
        assert data["payload"]["monotone"] is True

    def test_unknown_family(self, capsys):
        code, data = _invoke(capsys, "scan", "--family", "hexagonal", "--p-grid", "3", "--d-grid", "4")

        assert code == 2
        assert data["payload"]["code"] == "USAGE_ERROR"

    def test_empty_grid(self, capsys):
        code, data = _invoke(capsys, "scan", "--family", "antisym", "--p-grid", "3", "--d-grid", ",")

        assert code == 2
        assert data["payload"]["code"] == "USAGE_ERROR"


@pytest.mark.integration
class TestOracleCommand:
    """Test the oracle command."""

    def test_antisymmetric_supremum(self, capsys):
        code, data = _invoke(capsys, "oracle", "--target", "antisym-sup", "--d", "5", *FAST)

        assert code == 0
        assert data["payload"]["value"] == pytest.approx(0.5, abs=1e-6)
        assert data["payload"]["bound"] == "lower"

    def test_md_at_d2(self, capsys):
        _, data = _invoke(capsys, "oracle", "--target", "md", "--d", "2", *FAST)

        assert data["payload"]["value"] == pytest.approx(0.5, abs=1e-6)
        assert data["payload"]["bound"] == "upper"

    def test_same_seed_same_payload(self, capsys):
        _, first = _invoke(capsys, "oracle", "--target", "md", "--d", "3", "--seed", "4", *FAST)
        _, second = _invoke(capsys, "oracle", "--target", "md", "--d", "3", "--seed", "4", *FAST)

        assert first["payload"] == second["payload"]
        assert first["seed"] == 4

    def test_seed_from_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("ADDLAB_SEED", "12")
        _, data = _invoke(capsys, "oracle", "--target", "antisym-sup", "--d", "3", *FAST)

        assert data["seed"] == 12

    def test_subspace_target_needs_n(self, capsys):
        code, data = _invoke(capsys, "oracle", "--target", "subspace-sup", "--d", "4", *FAST)

        assert code == 2
        assert data["payload"]["details"] == {"flag": "--n"}

    def test_subspace_target(self, capsys):
        _, data = _invoke(capsys, "oracle", "--target", "subspace-sup", "--d", "4", "--n", "3", *FAST)

        assert data["payload"]["value"] == pytest.approx(0.5, abs=1e-6)
        assert data["payload"]["n"] == 3

    def test_unknown_target(self):
        with pytest.raises(SystemExit) as exc_info:
            run(["oracle", "--target", "everything", "--d", "3"])

        assert exc_info.value.code == 2


@pytest.mark.integration
class TestCensus:
    def test_census_values(self, capsys):
        code, data = _invoke(capsys, "census", "--p", "3", "--d", "10")

        assert code == 0
        assert data["payload_type"] == "census"
        assert data["payload"]["l_formula"] == 6
        assert data["payload"]["l_direct"] == 5
        assert data["payload"]["d0"] == 7
        assert data["payload"]["n_range"] == [40, 44]

    def test_census_needs_p_above_two(self, capsys):
        code, data = _invoke(capsys, "census", "--p", "2", "--d", "10")

        assert code == 2
        assert data["payload"]["code"] == "DOMAIN_ERROR"


@pytest.mark.integration
def test_json_logs_go_to_stderr(capsys):
    run(["census", "--p", "3", "--d", "8", "--log-json"])
    captured = capsys.readouterr()

    events = [orjson.loads(line) for line in captured.err.splitlines() if line.startswith("{")]
    assert {"command_accepted", "command_completed"} <= {e.get("event_type") for e in events}
    assert orjson.loads(captured.out)["payload"]["l_direct"] == 2


@pytest.mark.integration
class TestEnvelopeSchema:
    """Every JSON envelope validates against docs/schema.json."""

    @pytest.fixture(scope="class")
    def validator(self) -> jsonschema.Draft202012Validator:
        schema = orjson.loads(SCHEMA_PATH.read_bytes())
        jsonschema.Draft202012Validator.check_schema(schema)
        return jsonschema.Draft202012Validator(schema)

    @pytest.mark.parametrize(
        "argv",
        [
            ["construct", "--family", "parthasarathy", "--d", "3", *FAST],
            ["construct", "--family", "bell-extension", "--d", "6", "--n", "2", *FAST],
            ["verify", "--family", "antisym", "--d", "5", "--p", "3", *FAST],
            ["verify", "--family", "parthasarathy", "--d", "4", "--p", "3", "--m", "0.5", *FAST],
            ["scan", "--family", "subspace", "--p-grid", "3,4", "--d-grid", "4-8", "--format", "json"],
            ["oracle", "--target", "md", "--d", "3", *FAST],
            ["census", "--p", "3", "--d", "10"],
            ["verify", "--family", "antisym", "--d", "4", "--p", "1", *FAST],
        ],
        ids=["construct", "construct-extension", "verify", "verify-parthasarathy", "scan", "oracle", "census", "error"],
    )
    def test_payload_matches_schema(self, validator, argv, capsys):
        _, data = _invoke(capsys, *argv)

        assert [error.message for error in validator.iter_errors(data)] == []
