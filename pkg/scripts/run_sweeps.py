"""Run every bundled sweep config at desk scale (pass --full-scale for 5000 trials)."""

import sys
from pathlib import Path

from h2ad.cli import main

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    extra = sys.argv[1:]
    for cfg in sorted((ROOT / "configs").glob("*.yaml")):
        print(f"== {cfg.name}")
        code = main(["--config", str(cfg), *extra])
        if code:
            sys.exit(code)
