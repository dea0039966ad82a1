import sys

from afgroupoid.main import main

sys.exit(main())
