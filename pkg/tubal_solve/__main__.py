"""Entry point for ``python -m tubal_solve``."""

from tubal_solve.cli import main

main()
