"""Allow running with: python -m cogrowth"""

import sys

from cogrowth.cli import main

sys.exit(main())
