#!/usr/bin/env python3
"""Same run as `python -m src verify-paper --section all`, keeping the JSON report next to the repo."""

import json
import sys
from pathlib import Path

root_dir = Path(__file__).parent.parent
sys.path.insert(0, str(root_dir))

from loguru import logger

from src.cli import configure_logging
from src.config import settings
from src.report import save_report
from src.suite import run_all


def main():
    configure_logging()
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else settings.seed
    target = root_dir / "reports" / f"verification-seed{seed}.json"

    try:
        report = run_all(seed=seed)
        target.parent.mkdir(parents=True, exist_ok=True)
        save_report(report, target, "json", timings=True)
        summary = {
            "seed": seed,
            "passed": report.passed,
            "scenarios": {r.id: f"{sum(s.passed for s in r.steps)}/{len(r.steps)}" for r in report.scenarios},
            "errata": {q["id"]: q["verdict"] for q in (report.errata or {}).get("questions", [])},
            "report": str(target),
        }
        print(json.dumps(summary, ensure_ascii=False, indent=2))
    except Exception as e:
        logger.exception("Verification run crashed")
        print(f"error: {e}", file=sys.stderr)
        sys.exit(1)

    if not report.passed:
        sys.exit(1)


if __name__ == "__main__":
    main()
