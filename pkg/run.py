"""
Expansion Planner Runner
Command-line entry point: python run.py <command> ...
"""
import os
import sys
from pathlib import Path

# Fix Windows console encoding for Unicode support
if os.name == 'nt' and hasattr(sys.stdout, 'reconfigure'):
    sys.stdout.reconfigure(encoding='utf-8')
    sys.stderr.reconfigure(encoding='utf-8')

# Add the project root to Python path
sys.path.append(str(Path(__file__).parent))

from app.main import main

if __name__ == "__main__":
    sys.exit(main())
