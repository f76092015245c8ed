import sys

from qcal.cli.main import main

sys.exit(main())
