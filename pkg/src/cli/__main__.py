"""Entry point: python -m src.cli"""
import sys
from pathlib import Path

# repository root on the import path, as for the rest of the tree
sys.path.insert(0, str(Path(__file__).resolve().parent.parent.parent))

from src.cli.main import cli  # noqa: E402

if __name__ == "__main__":
    cli(prog_name="dydap")
