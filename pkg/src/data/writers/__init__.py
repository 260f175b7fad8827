from .field_writer import field_header, write_field
from .plot_writer import emit_plots
from .report_writer import read_report, to_jsonable, write_report
