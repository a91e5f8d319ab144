import sys

from qudsim.cli import main

sys.exit(main())
