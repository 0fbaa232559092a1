"""
Guaranteed State Estimation — Comparison Harness
=================================================
The complete pipeline:
  🎲 Seed → 📈 Simulate → 🔮 Predict → 📏 Correct → ✂️ Reduce → 📊 Compare

Usage:
    python -m src.main run configs/vdp_easy.ini
    python -m src.main list-methods
    python -m src.main oracle vdp:0.1 --steps 5
    python -m src.main validate configs/tank30.ini
"""

import sys

from src.harness.cli import cli


def main() -> int:
    return cli(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
