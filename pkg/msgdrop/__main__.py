# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import sys

from .harness.cli import main

sys.exit(main())
