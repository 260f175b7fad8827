"""pde-ident entry point; see scripts/ident_cli.py for the subcommands."""

import sys

from scripts.ident_cli import main

if __name__ == "__main__":
    sys.exit(main())
