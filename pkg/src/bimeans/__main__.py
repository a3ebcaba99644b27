import sys

from bimeans.cli import main

sys.exit(main())
