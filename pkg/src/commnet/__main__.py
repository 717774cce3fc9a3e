"""Allow ``python -m commnet``."""

import sys

from .cli import main

sys.exit(main())
