"""
scripts/generate_report.py

Run all checks and generate a structured JSON + Markdown report.

Usage:
    python scripts/generate_report.py
    python scripts/generate_report.py --output report.md
    python scripts/generate_report.py --fast --output report.md
"""

import argparse
import json
import re
import subprocess
from datetime import datetime
from pathlib import Path

ROOT = Path(__file__).parent.parent

CHECK_GROUPS = {
    "c01_core":       "C01 — Domain, RNG, Population",
    "c02_objectives": "C02 — Objectives and Budget",
    "c03_engine":     "C03 — DE Engine",
    "c04_boundary":   "C04 — Correction Strategies",
    "c05_analysis":   "C05 — EDPOIS and p_max",
    "c06_runner":     "C06 — Grid Runner",
    "c07_cli":        "C07 — CLI and Rendering",
}


def run_tests(path: str, fast: bool = False) -> dict:
    """Run pytest on a path and parse results."""
    cmd = ["python", "-m", "pytest", path, "--tb=no", "-q", "--no-header"]
    if fast:
        cmd += ["-m", "not slow"]
    result = subprocess.run(cmd, capture_output=True, text=True, cwd=ROOT)
    output = result.stdout + result.stderr

    # Summary line: "X passed, Y failed in Zs"
    match = re.search(r"(\d+) passed(?:, (\d+) failed)?", output)
    passed = int(match.group(1)) if match else 0
    failed = int(match.group(2)) if (match and match.group(2)) else 0

    return {
        "passed": passed,
        "failed": failed,
        "total": passed + failed,
        "output": output[:2000],
    }


def _check_files() -> list[str]:
    rows = []
    for folder, label in CHECK_GROUPS.items():
        for path in sorted((ROOT / "checks" / folder).glob("test_*.py")):
            rows.append(f"| {label.split(' — ')[0]} | `{path.relative_to(ROOT)}` |")
    return rows


def generate_report(output_file: str | None = None, fast: bool = False):
    """Run all checks and generate the report."""
    print("Running all checks..." + (" (slow sweeps skipped)" if fast else ""))
    print("=" * 60)

    results = {}
    total_passed = 0
    total_failed = 0

    for folder, label in CHECK_GROUPS.items():
        r = run_tests(f"checks/{folder}/", fast)
        results[folder] = {**r, "label": label}
        total_passed += r["passed"]
        total_failed += r["failed"]

        status = "✅" if r["failed"] == 0 else "⚠️ "
        print(f"  {status} {label}: {r['passed']}/{r['total']} passed")

    print(f"\n  Total: {total_passed}/{total_passed + total_failed} checks passed")

    timestamp = datetime.now().strftime("%Y-%m-%d %H:%M")
    lines = [
        "# DE Infeasibility Lab — Check Report",
        "",
        f"Generated: {timestamp}",
        "",
        "## Summary",
        "",
        "| Group | Checks | Passed | Failed |",
        "|-------|--------|--------|--------|",
    ]
    for r in results.values():
        status = "✅" if r["failed"] == 0 else "❌"
        lines.append(f"| {status} {r['label']} | {r['total']} | {r['passed']} | {r['failed']} |")
    lines += [
        f"| **TOTAL** | **{total_passed + total_failed}** | **{total_passed}** | **{total_failed}** |",
        "",
        "## Check Files",
        "",
        "| Group | File |",
        "|-------|------|",
        *_check_files(),
    ]
    report_md = "\n".join(lines)

    if output_file:
        Path(output_file).write_text(report_md)
        print(f"\nReport written to: {output_file}")
    else:
        print(f"\n{'-' * 60}")
        print(report_md)

    json_report = {
        "timestamp": timestamp,
        "fast": fast,
        "total_passed": total_passed,
        "total_failed": total_failed,
        "groups": results,
    }
    Path("report.json").write_text(json.dumps(json_report, indent=2))
    print("JSON report: report.json")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Run all checks and write a report.")
    parser.add_argument("--output", help="Markdown report path (default: print)")
    parser.add_argument("--fast", action="store_true", help="skip checks marked slow")
    args = parser.parse_args()
    generate_report(args.output, args.fast)
