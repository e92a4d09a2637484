"""Run the command-line interface as ``python -m cohit``."""

import sys

from .cli import main

sys.exit(main())
