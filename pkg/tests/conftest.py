import sys
from pathlib import Path

# Frozen referee values live next to the generator that produced them.
sys.path.insert(0, str(Path(__file__).resolve().parent / "oracles"))
