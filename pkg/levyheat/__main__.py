# __main__.py

import sys

from .harness.cli import main


sys.exit(main())
