"""Run every verification suite through the CLI and summarize the report.

Exit status is the CLI's: 0 only if all checks pass.
"""
import argparse
import json
import pathlib
import sys

from basslab import cli


def entry_line(entry):
    label = (entry.get("label") or entry.get("pair") or entry.get("name")
             or f"{entry.get('diagnostic')}(k={entry.get('k')}, M={entry.get('M')})")
    detail = ""
    if "max_gap" in entry:
        detail = f"max_gap={entry['max_gap']:.3e}"
    elif "min_value" in entry:
        detail = f"min={entry['min_value']:.3e}"
    elif "violation_count" in entry:
        detail = f"violations={entry['violation_count']}"
    mark = "ok " if entry["passed"] else "FAIL"
    return f"  [{mark}] {label:28s} {detail}"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--suite", default="all", choices=cli.SUITES)
    ap.add_argument("--trials", type=int, default=4000)
    ap.add_argument("--out", type=pathlib.Path,
                    default=pathlib.Path("results/verify_report.json"))
    ap.add_argument("-v", "--verbose", action="store_true",
                    help="print every entry, not just failures")
    args = ap.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)

    code = cli.main([
        "verify", "--suite", args.suite,
        "--trials", str(args.trials),
        "--out", str(args.out),
    ])
    report = json.loads(args.out.read_text())

    for suite in report["suites"]:
        entries = (suite.get("cases", [])
                   + suite.get("monotonicity", [])
                   + suite.get("coupling", []))
        n_ok = sum(e["passed"] for e in entries)
        print(f"{suite['suite']}: {n_ok}/{len(entries)} checks passed")
        for e in entries:
            if args.verbose or not e["passed"]:
                print(entry_line(e))

    print(f"report: {args.out}  exit={code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
