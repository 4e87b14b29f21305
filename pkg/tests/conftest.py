import sys
from pathlib import Path

from hypothesis import settings

# oracles.py lives next to the tests
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("deterministic", derandomize=True)
settings.load_profile("deterministic")
