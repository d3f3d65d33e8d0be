"""
Allows calling `opacsyn [command]` as `python -m opacsyn [command]`.
"""

from opacsyn.run import main

if __name__ == "__main__":
    main()
