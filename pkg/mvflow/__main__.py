import sys

from mvflow.main import main

sys.exit(main())
