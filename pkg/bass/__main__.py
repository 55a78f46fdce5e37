import sys

from bass.main import main

sys.exit(main())
