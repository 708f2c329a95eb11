"""Allow `python -m barrierkit` alongside the installed script."""

from .cli import main

main()
