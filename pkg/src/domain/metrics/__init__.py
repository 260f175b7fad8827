from .accuracy import coefficient_errors, function_error, support_scores
from .dynamics import dynamic_error, nsr, residual_error
from .summary import evaluate_candidate, evaluate_report
