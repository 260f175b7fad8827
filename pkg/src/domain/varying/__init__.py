from .basis import build_basis, evaluate_space, field_values, node_values
from .caslr import caslr, caslr_path, patch_systems, stack_patches, tile_patches
from .group_lasso import block_magnitudes, group_lasso, select_basis_size
from .group_system import assemble_group_system, coefficient_functions, normalize_group_columns
