import sys

from segrd.cli import main

sys.exit(main())
