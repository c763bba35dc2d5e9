import sys

from naturaltt.cli import main

sys.exit(main())
