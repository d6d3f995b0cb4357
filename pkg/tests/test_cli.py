from __future__ import annotations

import json
import logging

import pytest

from smg import cli
from smg.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, TRACE_LOGGERS, main
from smg.core.errors import ConstructionError


@pytest.fixture(scope="module")
def icosa_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "icosa.json"
    assert main(["construct", "icosahedron", "-o", str(path)]) == EXIT_OK
    return path


@pytest.fixture(scope="module")
def octa_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "octa.json"
    assert main(["construct", "octahedron", "-o", str(path)]) == EXIT_OK
    return path


# ---------------------------------------------------------------------
# construct / verify / audit
# ---------------------------------------------------------------------

def test_construct_prints_a_summary(tmp_path, capsys):
    out = tmp_path / "icosa.json"
    assert main(["construct", "icosahedron", "-o", str(out)]) == EXIT_OK
    summary = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert (summary["V"], summary["E"], summary["F"]) == (12, 30, 20)
    assert summary["certified"] is True
    assert out.exists()


def test_verify_regular(icosa_file, capsys):
    assert main(["verify", str(icosa_file), "--regular", "5"]) == EXIT_OK
    assert "overall: PASS" in capsys.readouterr().out


def test_verify_json(icosa_file, capsys):
    assert main(["verify", str(icosa_file), "--json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["overall"] is True
    assert {c["name"] for c in report["checks"]} >= {"edge_lengths", "separation", "faces"}


def test_verify_octahedron_at_degree_five(octa_file, capsys):
    assert main(["verify", str(octa_file), "--min-degree", "5"]) == EXIT_FAILED
    out = capsys.readouterr().out
    assert "FAIL min_degree" in out
    assert out.count("witness") == 6
    assert main(["verify", str(octa_file), "--min-degree", "4"]) == EXIT_OK


def test_audit(icosa_file, capsys):
    assert main(["audit", str(icosa_file)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "V=12 E=30 F=20 connected=True" in out
    assert "all_degree_5=True" in out


def test_audit_json(octa_file, capsys):
    assert main(["audit", str(octa_file), "--json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["all_finals_zero"] is True
    assert data["equality_flags"]["all_degree_5"] is False


# ---------------------------------------------------------------------
# export
# ---------------------------------------------------------------------

@pytest.mark.parametrize("fmt, head", [("off", "OFF"), ("csv", "i,j,length_rad"), ("svg", "<svg")])
def test_export(icosa_file, tmp_path, fmt, head):
    out = tmp_path / f"icosa.{fmt}"
    assert main(["export", str(icosa_file), "--format", fmt, "-o", str(out)]) == EXIT_OK
    assert out.read_text(encoding="utf-8").startswith(head)


def test_export_view(icosa_file, tmp_path):
    out = tmp_path / "side.svg"
    argv = ["export", str(icosa_file), "--format", "svg", "--view", "1", "0", "0", "-o", str(out)]
    assert main(argv) == EXIT_OK
    top = tmp_path / "top.svg"
    assert main(["export", str(icosa_file), "--format", "svg", "-o", str(top)]) == EXIT_OK
    assert out.read_text(encoding="utf-8") != top.read_text(encoding="utf-8")


# ---------------------------------------------------------------------
# Failures
# ---------------------------------------------------------------------

def test_bad_file_is_a_usage_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"format": "smg-1", "lambda": 3.2, "vertices": [], "edges": []}', encoding="utf-8")
    assert main(["verify", str(bad)]) == EXIT_USAGE
    assert "outside (0, pi)" in capsys.readouterr().err


def test_missing_file_is_a_usage_error(tmp_path):
    assert main(["audit", str(tmp_path / "missing.json")]) == EXIT_USAGE


def test_failed_export_writes_nothing(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("not json", encoding="utf-8")
    out = tmp_path / "out.svg"
    assert main(["export", str(bad), "--format", "svg", "-o", str(out)]) == EXIT_USAGE
    assert not out.exists()


def test_failed_construction_writes_nothing(tmp_path, monkeypatch, capsys):
    def fail(name, settings):
        raise ConstructionError(f"{name}: no start reached a 5-regular contact structure")

    monkeypatch.setattr(cli, "build", fail)
    out = tmp_path / "never.json"
    assert main(["construct", "robinson-48", "-o", str(out)]) == EXIT_FAILED
    assert not out.exists()
    assert "no start reached" in capsys.readouterr().err


def test_unknown_construction_is_rejected_by_the_parser():
    with pytest.raises(SystemExit) as err:
        main(["construct", "dodecahedron", "-o", "x.json"])
    assert err.value.code == 2


def test_overrides_reach_the_settings(monkeypatch, tmp_path):
    seen = {}

    def capture(name, settings):
        seen["settings"] = settings
        raise ConstructionError("stop")

    monkeypatch.setattr(cli, "build", capture)
    argv = ["construct", "snub-dodecahedron", "--seed", "7", "--starts", "3", "--polish-tol", "1e-11"]
    main(argv + ["-o", str(tmp_path / "x.json")])
    settings = seen["settings"]
    assert (settings.search.seed, settings.search.starts) == (7, 3)
    assert settings.polish.tol == 1e-11


# ---------------------------------------------------------------------
# Tracing
# ---------------------------------------------------------------------

def test_trace_file_collects_solver_lines(tmp_path):
    trace = tmp_path / "trace.log"
    try:
        assert main(["--trace", str(trace), "construct", "snub-cube", "-o", str(tmp_path / "s.json")]) == EXIT_OK
    finally:
        for name in TRACE_LOGGERS:
            logger = logging.getLogger(name)
            for h in [h for h in logger.handlers if isinstance(h, logging.FileHandler)]:
                logger.removeHandler(h)
                h.close()
            logger.setLevel(logging.INFO)
    text = trace.read_text(encoding="utf-8")
    assert "Iteration 0: max residual" in text
    assert "snub-cube: certified" in text
