import sys

from .scripts.ssguard_cli import main

if __name__ == "__main__":
    sys.exit(main())
