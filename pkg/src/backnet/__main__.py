import sys

from backnet.cli import main

sys.exit(main())
