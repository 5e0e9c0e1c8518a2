import sys

from pullin.cli import main

sys.exit(main())
