# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

__version__ = '0.1.0'
