"""Allow running as `python -m pautkit`."""

from pautkit.cli import main

if __name__ == "__main__":
    main()
