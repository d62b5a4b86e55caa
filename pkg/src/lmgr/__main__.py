import sys

from lmgr.cli import main

sys.exit(main())
