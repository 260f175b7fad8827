from .finite_difference import derivative_matrix, fd_derivative, stencil_weights, time_derivative
from .lsma import lsma_matrix, lsma_smooth
from .mls import mls_matrix, mls_smooth
from .sdd import sdd_apply, sdd_derivative, sdd_time_derivative, smoothing_matrix
