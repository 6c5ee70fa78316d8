"""
Tests for the command-line interface, sweeps and the identity suite.
"""

import sys
import os
import io
import json
from contextlib import redirect_stderr, redirect_stdout

# Set UTF-8 encoding for Windows console
if sys.platform == "win32":
    sys.stdout.reconfigure(encoding='utf-8')

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from frobtrace import cli
from frobtrace.cli import (
    EXIT_OK,
    EXIT_USAGE,
    SweepConfig,
    UsageError,
    run_identity_suite,
    run_sweep,
    split_prime_power,
    sweep_fields,
)
from frobtrace.config import get_settings, load_settings, reset_settings
from frobtrace.elliptic import TraceReport
from frobtrace.errors import ConfigError
from frobtrace.field import build_field
from frobtrace.utils.run_log import CheckKind, CheckStatus, VerificationLog
from tests.runner import GRID, exit_with, grid_field, run_tests


def _run(argv):
    """Run the CLI, returning (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli.main(argv)
    reset_settings()
    return code, out.getvalue(), err.getvalue()


def test_trace_command():
    """y^2 = x^3 + x + 1 over F_13 through the trace subcommand."""
    print("Testing trace command...")

    code, out, _ = _run(["trace", "--p", "13", "--e", "1", "--a", "1", "--b", "1", "--method", "all"])
    assert code == EXIT_OK, f"expected exit 0, got {code}"
    record = json.loads(out)
    assert record["trace_thm1"] == record["trace_thm2"] == record["trace_oracle"] == -4, record
    assert record["agree"] is True, "methods should agree"

    code, out, _ = _run(["trace", "--p", "5", "--e", "2", "--a", "1", "--b", "1", "--format", "csv"])
    assert code == EXIT_OK, "F_25 is a valid formula field"
    header, row = out.strip().split("\n")
    assert header.split(",") == list(TraceReport.FIELDS), "CSV header follows the record schema"

    print("✓ Trace command tests passed")


def test_usage_errors():
    """Bad hypotheses exit with code 2 and a diagnostic on stderr."""
    print("\nTesting usage errors...")

    code, out, err = _run(["trace", "--p", "11", "--a", "1", "--b", "1", "--method", "thm1"])
    assert code == EXIT_USAGE, "q = 11 is not 1 mod 12"
    assert out == "", "nothing is written to stdout on error"
    assert "1 (mod 12)" in err, err

    code, _, _ = _run(["identities", "--p", "4"])
    assert code == EXIT_USAGE, "4 is not prime"

    code, _, _ = _run(["trace", "--p", "13", "--a", "0", "--b", "1", "--method", "thm2"])
    assert code == EXIT_USAGE, "j = 0 is excluded"

    code, _, err = _run(["sweep", "--q", "13", "--tolerance", "-1"])
    assert code == EXIT_USAGE and "tolerance" in err, "negative tolerance is rejected"

    with pytest.raises(UsageError):
        sweep_fields([11], None, None)
    with pytest.raises(UsageError):
        split_prime_power(12)
    assert split_prime_power(169) == (13, 2), "169 = 13^2"

    print("✓ Usage error tests passed")


def test_sweep_determinism():
    """Same seed gives byte-identical output, independent of --jobs."""
    print("\nTesting sweep determinism...")

    argv = ["sweep", "--q", "13,25", "--curves", "5", "--seed", "42"]
    first = _run(argv)
    second = _run(argv)
    threaded = _run(argv + ["--jobs", "4"])
    assert first[0] == EXIT_OK, f"sweep should agree everywhere, got exit {first[0]}"
    assert first[1] == second[1] == threaded[1], "sweep output must be reproducible"

    lines = first[1].strip().split("\n")
    summary = json.loads(lines[-1])["summary"]
    assert summary["curves_tested"] == 10 and summary["agreements"] == 10, summary
    assert summary["elapsed"] is None, "elapsed is only reported with --timing"
    assert [json.loads(line)["q"] for line in lines[:-1]] == [13] * 5 + [25] * 5, "records in (q, index) order"

    print("✓ Sweep determinism tests passed")


def test_sweep_edge_cases():
    """Zero curves, field ranges and CSV output."""
    print("\nTesting sweep edge cases...")

    code, out, _ = _run(["sweep", "--q", "13", "--curves", "0"])
    assert code == EXIT_OK, "an empty sweep succeeds"
    summary = json.loads(out.strip())["summary"]
    assert summary["curves_tested"] == 0 and summary["agreements"] == 0, summary

    assert sweep_fields([], 10, 50) == (13, 25, 37, 49), "prime powers 1 mod 12 in [10, 50]"

    code, out, _ = _run(["sweep", "--q", "37", "--curves", "3", "--format", "csv"])
    lines = out.strip().split("\n")
    assert code == EXIT_OK and len(lines) == 5, "header, three rows and the summary comment"
    assert lines[-1].startswith("# "), "summary is a comment line in CSV mode"

    reports, summary = run_sweep(SweepConfig(q_list=(49,), curves_per_q=4, rng_seed=3, timing=True))
    assert len(reports) == 4 and all(r.agree for r in reports), "all formulas agree over F_49"
    assert summary["elapsed"] is not None, "--timing reports elapsed seconds"

    print("✓ Sweep edge case tests passed")


def test_identity_suites():
    """Every applicable identity holds over F_13, F_25 and F_37."""
    print("\nTesting identity suites...")

    for p, e in ((13, 1), (5, 2), (37, 1)):
        log = run_identity_suite(build_field(p, e), trials=50)
        failed = [entry.name for entry in log.get_failed_checks()]
        assert log.all_passed(), f"failed over F_{p ** e}: {failed}"

    log = run_identity_suite(build_field(11, 1), trials=5)
    skipped = {e.name for e in log.entries if e.status is CheckStatus.SKIPPED}
    assert "Davenport-Hasse m = 3" in skipped, "m = 3 needs q = 1 mod 3"
    assert "constant-term binomial product" in skipped, "needs q = 1 mod 12"
    assert log.all_passed(), "skipped checks are not failures"

    code, out, _ = _run(["identities", "--p", "5", "--e", "2", "--trials", "5"])
    assert code == EXIT_OK, "identity suite over F_25 passes"
    assert "measured sign -" in out, "G_half = -5 is reported as informational"

    code, out, _ = _run(["identities", "--p", "13", "--trials", "5", "--format", "json"])
    rows = [json.loads(line) for line in out.strip().split("\n")]
    assert rows[-1]["summary"]["failed"] == 0, "json summary reports no failures"
    assert all("execution_time_ms" not in row for row in rows[:-1]), "timing is omitted by default"

    code, out, _ = _run(["identities", "--p", "13", "--trials", "5", "--format", "json", "--timing"])
    rows = [json.loads(line) for line in out.strip().split("\n")]
    assert code == EXIT_OK, "timed identity suite passes"
    assert all("execution_time_ms" in row for row in rows[:-1]), "--timing adds per-check times"

    code, out, _ = _run(["identities", "--p", "13", "--trials", "5", "--timing"])
    assert code == EXIT_OK and " ms" in out, "text output shows times with --timing"

    print("✓ Identity suite tests passed")


def test_identity_suite_over_grid():
    """Every applicable identity holds with 50 trials for every grid field."""
    print("\nTesting identity suites over the field grid...")

    for q in GRID:
        log = run_identity_suite(grid_field(q), trials=50)
        failed = [entry.name for entry in log.get_failed_checks()]
        assert log.all_passed(), f"failed over F_{q}: {failed}"

    print("✓ Grid identity suite tests passed")


def test_identities_in_characteristic_two():
    """q = 2 skips the quadratic relation instead of rejecting the field."""
    print("\nTesting identity suite over F_2...")

    log = run_identity_suite(build_field(2, 1), trials=5)
    skipped = {e.name for e in log.entries if e.status is CheckStatus.SKIPPED}
    assert "Davenport-Hasse m = 2" in skipped, "m = 2 needs q odd"
    assert log.all_passed(), "skipped checks are not failures"

    code, _, err = _run(["identities", "--p", "2"])
    assert code == EXIT_OK, f"F_2 is a valid field for the identity suite, got {code}: {err}"

    print("✓ Characteristic two tests passed")


def test_malformed_environment():
    """Unparseable FROBTRACE_* values exit with code 2 and name the variable."""
    print("\nTesting malformed environment settings...")

    for name, raw in (("FROBTRACE_MAX_Q", "abc"), ("FROBTRACE_TOLERANCE", "tight")):
        saved = os.environ.get(name)
        os.environ[name] = raw
        try:
            reset_settings()
            with pytest.raises(ConfigError):
                load_settings()
            code, out, err = _run(["trace", "--p", "13", "--a", "1", "--b", "1"])
            assert code == EXIT_USAGE, f"{name}={raw} should be a usage error, got {code}"
            assert name in err and "Traceback" not in err, err
            assert out == "", "nothing is written to stdout on error"
        finally:
            if saved is None:
                os.environ.pop(name, None)
            else:
                os.environ[name] = saved
            reset_settings()

    print("✓ Malformed environment tests passed")


def test_verification_log_metrics():
    """Status assignment and metrics of the verification log."""
    print("\nTesting verification log...")

    log = VerificationLog()
    log.record("ok", CheckKind.GAUSS_SUM, 13, [1e-12, 2e-12], 1e-5)
    log.record("bad", CheckKind.TRACE, 13, [1.0], 1e-5)
    log.record("none", CheckKind.SPECIAL, 13, [], 1e-5)
    log.record("sign", CheckKind.SPECIAL, 13, [7.2], 1e-5, informational=True)

    statuses = [e.status for e in log.entries]
    assert statuses == [CheckStatus.PASSED, CheckStatus.FAILED, CheckStatus.SKIPPED, CheckStatus.INFO], statuses
    assert [e.name for e in log.get_failed_checks()] == ["bad"], "one failure"
    metrics = log.calculate_metrics()
    assert metrics["pass_rate"] == 50.0, metrics
    assert metrics["max_deviation"] == 1.0, "informational deviations are not graded"
    assert metrics["checks_by_kind"] == {"gauss_sum": 1, "trace": 1, "special": 2}, metrics
    assert VerificationLog().calculate_metrics()["total_checks"] == 0, "empty log"

    print("✓ Verification log tests passed")


def test_settings_override():
    """--tolerance changes the global settings only for that run."""
    print("\nTesting settings override...")

    reset_settings()
    default = get_settings().tolerance
    code, _, _ = _run(["trace", "--p", "13", "--a", "1", "--b", "1", "--tolerance", "1e-4"])
    assert code == EXIT_OK, "looser tolerance still agrees"
    assert get_settings().tolerance == default, "settings are reset after the run"

    print("✓ Settings override tests passed")


def main():
    """Run all CLI tests."""
    return run_tests("CLI TEST SUITE", [
        test_trace_command,
        test_usage_errors,
        test_sweep_determinism,
        test_sweep_edge_cases,
        test_identity_suites,
        test_identity_suite_over_grid,
        test_identities_in_characteristic_two,
        test_malformed_environment,
        test_verification_log_metrics,
        test_settings_override,
    ])


if __name__ == "__main__":
    exit_with(main())
