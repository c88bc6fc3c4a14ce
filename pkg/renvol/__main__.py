import sys

from renvol.cli.dispatch import main

sys.exit(main())
