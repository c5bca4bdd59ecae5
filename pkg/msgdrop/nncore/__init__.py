# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .mlp import LayerSpec, Mlp, Gradients, ForwardCache, ACTIVATIONS
from .mlp import mlp_init, forward, backward, chain_specs
from .adam import AdamState, adam_step
from .gradcheck import grad_check, check_gradients, numerical_gradient
from .gradcheck import relative_error, kink_free_input
from .checkpoint import save_mlp, load_mlp, mlp_to_bytes, mlp_from_bytes
from .checkpoint import CheckpointError
