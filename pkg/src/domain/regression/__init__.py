from .group import group_least_squares, group_subspace_pursuit, l10_norm
from .lasso import lambda_grid, lasso, lasso_path, soft_threshold
from .least_squares import least_squares_on_support, solve_columns
from .proximal import ProximalResult, proximal_gradient
from .subspace_pursuit import subspace_pursuit, top_k
from .trimming import contribution_scores, group_trim, trim
