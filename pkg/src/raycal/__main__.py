"""Allow running as ``python -m raycal``."""

from raycal.cli import main

main()
