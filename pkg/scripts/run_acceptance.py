"""Run only the acceptance criteria and show their pass/fail lines.

    python scripts/run_acceptance.py
"""
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    cmd = [sys.executable, "-m", "pytest", str(ROOT / "tests" / "test_acceptance.py"), "-q", "-s"]
    sys.exit(subprocess.call(cmd, cwd=ROOT))
