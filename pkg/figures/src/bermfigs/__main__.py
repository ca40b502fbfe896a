"""Allow ``python3 -m bermfigs``."""

import sys

from .cli import main

sys.exit(main())
