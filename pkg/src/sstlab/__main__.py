import sys

from sstlab.cli import main

sys.exit(main())
