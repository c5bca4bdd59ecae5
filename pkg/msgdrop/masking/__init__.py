# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .blocks import BlockLayout, BlockMask
from .blocks import sample_block_mask, sample_block_masks
from .blocks import sample_element_mask, sample_element_masks
from .blocks import enumerate_block_masks, apply_mask, exec_scale
