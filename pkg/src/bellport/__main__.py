import sys

from bellport.cli import main

sys.exit(main())
