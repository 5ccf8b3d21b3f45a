#!/usr/bin/env python3
"""
Gibbs Explorer - Entry Point
Launch script for the src/ package layout
"""

import sys
from pathlib import Path

# Add src to Python path
src_path = Path(__file__).parent / "src"
sys.path.insert(0, str(src_path))

from gibbs_explorer.main import main

if __name__ == "__main__":
    sys.exit(main())
