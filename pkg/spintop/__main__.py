"""Entry point for `python -m spintop`."""

import sys

from spintop.cli import main

sys.exit(main())
