import sys

from torus_lab.cli import main

sys.exit(main())
