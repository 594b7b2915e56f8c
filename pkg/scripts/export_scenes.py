"""Write the built-in scenes and their default queries as JSON files."""
import sys

from mmsplan.cli import main

if __name__ == "__main__":
    sys.exit(main(["scenes", sys.argv[1] if len(sys.argv) > 1 else "scenes"]))
