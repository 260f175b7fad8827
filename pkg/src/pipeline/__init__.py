from .identification import IDENTIFIERS, Identification
from .pipeline import IdentPipeline, run_pipeline, write_noisy_field
