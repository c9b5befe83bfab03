import sys

from hunter_saxton.cli import main

sys.exit(main())
