"""Allow running CLI as a module: python -m meshwalk.cli"""

from . import main

if __name__ == "__main__":
    main()
