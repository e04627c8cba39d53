"""Trace serialization, the CLI surface, and run determinism."""

import io
import json

import pytest

from monodromy.cli import main, verify_document
from monodromy.runner import RequestError, RunRequest, run_request
from monodromy.trace import (
    SCHEMA_VERSION,
    Frame,
    TraceDocument,
    TraceReadError,
    read_trace,
    write_trace,
)


def empty_document():
    return TraceDocument(
        schema_version=SCHEMA_VERSION, scenario="quartic-nested", degree=4,
        expressions=[], t_grid=[], frames=[], radical_index=[],
        final_permutation="()", closure_residuals={}, verdict="no-witness",
        survey=None, meta={"depth": 3})


@pytest.fixture(scope="module")
def swap_doc():
    return run_request(RunRequest(scenario="quadratic-swap"))


class TestRoundTrip:
    def test_empty_frames_document(self, tmp_path):
        doc = empty_document()
        path = tmp_path / "empty.json"
        write_trace(doc, path)
        assert read_trace(path) == doc

    def test_swap_trace_round_trips_bit_exact(self, swap_doc, tmp_path):
        path = tmp_path / "swap.json"
        write_trace(swap_doc, path)
        back = read_trace(path)
        assert back == swap_doc
        # residuals preserved exactly through their decimal form
        assert back.closure_residuals == swap_doc.closure_residuals
        # and a second serialization is byte-identical
        assert back.to_json_bytes() == swap_doc.to_json_bytes()

    def test_file_object_round_trip(self, swap_doc):
        buf = io.BytesIO()
        write_trace(swap_doc, buf)
        buf.seek(0)
        assert read_trace(buf) == swap_doc

    def test_unknown_schema_version(self, swap_doc):
        data = swap_doc.to_json_dict()
        data["schema_version"] = 99
        with pytest.raises(TraceReadError, match="schema_version 99"):
            TraceDocument.from_json_dict(data)

    def test_malformed_json_reports_location(self):
        with pytest.raises(TraceReadError, match="line"):
            read_trace(io.StringIO("{\n  \"scenario\": oops\n}"))

    def test_frame_count_must_match_grid(self):
        doc = empty_document()
        doc.t_grid = [0.0, 1.0]
        with pytest.raises(TraceReadError, match="disagree"):
            doc.validate()

    def test_frame_shape_checked(self):
        doc = empty_document()
        doc.t_grid = [0.0]
        doc.frames = [Frame(roots=[0j], coeffs=[0j, 0j], expr_values=[], radicals=[])]
        with pytest.raises(TraceReadError, match="exactly 4"):
            doc.validate()


class TestDeterminism:
    def test_identical_requests_identical_bytes(self, swap_doc):
        again = run_request(RunRequest(scenario="quadratic-swap"))
        assert again.to_json_bytes() == swap_doc.to_json_bytes()

    def test_seed_and_samples_enter_document(self):
        a = run_request(RunRequest(scenario="quadratic-swap", samples=32))
        b = run_request(RunRequest(scenario="quadratic-swap", samples=48))
        assert a.to_json_bytes() != b.to_json_bytes()

    def test_survey_documents_deterministic(self):
        a = run_request(RunRequest(scenario="eq1-monodromy"))
        b = run_request(RunRequest(scenario="eq1-monodromy"))
        assert a.to_json_bytes() == b.to_json_bytes()


class TestRunRequestValidation:
    def test_unknown_scenario(self):
        with pytest.raises(RequestError, match="unknown scenario"):
            RunRequest.from_dict({"scenario": "nope"})

    def test_unknown_fields_rejected(self):
        with pytest.raises(RequestError, match="unknown request fields"):
            RunRequest.from_dict({"scenario": "quadratic-swap", "bogus": 1})

    def test_exprs_must_be_strings(self):
        with pytest.raises(RequestError, match="exprs"):
            RunRequest.from_dict({"scenario": "quadratic-swap", "exprs": [1]})

    def test_custom_requires_spec(self):
        with pytest.raises(RequestError, match="custom"):
            RunRequest.from_dict({"scenario": "custom"})

    def test_custom_spec_validation(self):
        base = {"degree": 2, "start": [[1, 0], [-1, 0]],
                "loops": [{"root": 1, "points": [[1, 0], [1, 0.5], [1, 0]]}],
                "stack": [{"loop": 0}]}
        ok = RunRequest.from_dict({"scenario": "custom", "custom": base})
        assert ok.custom.degree == 2
        bad = dict(base, stack=[{"loop": 5}])
        with pytest.raises(RequestError, match="unknown loop"):
            RunRequest.from_dict({"scenario": "custom", "custom": bad})
        bad = dict(base, loops=[])
        with pytest.raises(RequestError, match="no recorded loops"):
            RunRequest.from_dict({"scenario": "custom", "custom": bad})


class TestVerify:
    def test_verify_accepts_engine_output(self, swap_doc):
        assert verify_document(swap_doc) == []

    def test_verify_accepts_survey_output(self):
        doc = run_request(RunRequest(scenario="quintic-arnold"))
        assert verify_document(doc) == []

    def test_verify_catches_tampered_roots(self, swap_doc):
        data = swap_doc.to_json_dict()
        data["frames"][3]["roots"][0] = [5.0, 5.0]
        doc = TraceDocument.from_json_dict(data)
        problems = verify_document(doc)
        assert any("residual" in p for p in problems)

    def test_verify_catches_wrong_permutation(self, swap_doc):
        data = swap_doc.to_json_dict()
        data["final_permutation"] = "()"
        doc = TraceDocument.from_json_dict(data)
        problems = verify_document(doc)
        assert any("permutation" in p for p in problems)


class TestCli:
    def test_run_writes_trace_and_exits_zero(self, tmp_path, capsys):
        out = tmp_path / "trace.json"
        code = main(["run", "quadratic-swap", "--out", str(out)])
        assert code == 0
        captured = capsys.readouterr()
        assert "formula-cannot-trace-roots" in captured.out
        doc = read_trace(out)
        assert doc.scenario == "quadratic-swap"
        assert doc.verdict == "formula-cannot-trace-roots"

    def test_run_positive_control_exits_one(self, capsys):
        code = main(["run", "quadratic-swap", "--expr",
                     "-(a1)/2 + root(2, (a1^2)/4 - a0)"])
        captured = capsys.readouterr()
        assert code == 1
        assert "falsification not achieved" in captured.err

    def test_run_quartic_depth3_no_witness_ok(self, capsys):
        code = main(["run", "quartic-nested", "--depth", "3"])
        captured = capsys.readouterr()
        assert code == 0
        assert "no-witness" in captured.out or "no non-identity witness" in captured.out

    def test_group_derived_series_output(self, capsys):
        assert main(["group", "derived-series", "4"]) == 0
        assert capsys.readouterr().out.strip() == "24 12 4 1"

    def test_group_derived_series_bad_n(self, capsys):
        assert main(["group", "derived-series", "12"]) == 2

    def test_expr_parse_ok(self, capsys):
        assert main(["expr", "parse", "root(2, a0) + a1"]) == 0
        out = capsys.readouterr().out
        assert "depth:        1" in out
        assert "a0 a1" in out

    def test_expr_parse_syntax_error_position(self, capsys):
        code = main(["expr", "parse", "root(2, a0"])
        captured = capsys.readouterr()
        assert code == 2
        assert "position 10" in captured.err

    def test_verify_round_trip(self, tmp_path, capsys):
        out = tmp_path / "t.json"
        assert main(["run", "cubic-commutator", "--out", str(out)]) == 0
        capsys.readouterr()
        assert main(["verify", str(out)]) == 0
        assert "OK" in capsys.readouterr().out

    def test_verify_tampered_file_fails(self, tmp_path, capsys):
        out = tmp_path / "t.json"
        main(["run", "quadratic-swap", "--out", str(out)])
        data = json.loads(out.read_text())
        data["frames"][0]["roots"][0] = [9.0, 9.0]
        out.write_text(json.dumps(data))
        capsys.readouterr()
        assert main(["verify", str(out)]) == 1

    def test_verify_missing_file(self, capsys):
        assert main(["verify", "/nonexistent/trace.json"]) == 2

    def test_usage_error_exit_code(self):
        assert main(["run", "unknown-scenario"]) == 2
        assert main([]) == 2

    def test_cli_matches_library_document(self, tmp_path, swap_doc):
        out = tmp_path / "t.json"
        main(["run", "quadratic-swap", "--out", str(out)])
        assert read_trace(out).to_json_bytes() == swap_doc.to_json_bytes()

    def test_run_rejects_bad_expression(self, capsys):
        code = main(["run", "quadratic-swap", "--expr", "root(2, a0"])
        captured = capsys.readouterr()
        assert code == 2
        assert "position" in captured.err

    def test_port_resolution_order(self):
        from monodromy.cli import resolve_port
        assert resolve_port(None, None) == 8080
        assert resolve_port(None, "9001") == 9001
        assert resolve_port(7000, "9001") == 7000
