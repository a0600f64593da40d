import sys

from digadget.cli import main

sys.exit(main())
