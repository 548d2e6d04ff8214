"""``python -m fck``."""

import sys

from fck.cli import main

sys.exit(main())
