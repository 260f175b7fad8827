from .evaluation import DerivativeTable, eval_feature_pointwise
from .lookup import dictionary_from_labels, parse_label, resolve_label, suggest_labels
from .terms import build_dictionary, monomial_term, weak_term
