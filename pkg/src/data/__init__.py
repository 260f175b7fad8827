from .loaders import load_field
from .writers import emit_plots, read_report, write_field, write_report
