#!/usr/bin/env python3
"""
horncheck - entry point
Exact Schubert calculus and Horn recursion checks from the command line
"""

import os
import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Setup paths so scripts can be imported
PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
SCRIPTS_DIR = os.path.join(PROJECT_ROOT, 'scripts')
sys.path.insert(0, SCRIPTS_DIR)

from horncheck_cli import cli_main  # noqa: E402

if __name__ == '__main__':
    sys.exit(cli_main())
