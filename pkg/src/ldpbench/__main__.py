"""``python -m ldpbench``."""

import sys

from ldpbench.presentation.cli.main import cli_main

if __name__ == "__main__":
    sys.exit(cli_main())
