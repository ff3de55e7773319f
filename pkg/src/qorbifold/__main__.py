import sys

from qorbifold.workbench.cli import main

sys.exit(main())
