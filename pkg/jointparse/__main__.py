import sys

from jointparse.cli import main

sys.exit(main())
