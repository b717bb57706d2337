import sys

from ordfix.cli import main

sys.exit(main())
