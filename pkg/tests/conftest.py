from __future__ import annotations

import os
import sys

# make the sibling helper modules (generators.py) importable regardless of
# how pytest was invoked
sys.path.insert(0, os.path.dirname(__file__))
