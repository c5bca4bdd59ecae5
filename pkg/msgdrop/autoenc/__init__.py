# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .autoencoder import Autoencoder, pretrain, encode
from .autoencoder import collect_pursuit_samples
