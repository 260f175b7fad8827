from .differential import assemble_differential
from .normalization import (
    column_normalize,
    dump_system_csv,
    error_normalize,
    mutual_coherence,
    narrow_system,
    select_columns,
)
from .regions import high_dynamic_region, junction_threshold
from .weak import WeakIntegrator, assemble_weak, default_test_function, leading_coefficient_scores
