from .bee import BeeSelection, bee
from .cross_validation import cee
from .evolution_error import candidate_pde, mtee, tee, tee_candidates_from_path, tee_many
from .residual_reduction import RrcSelection, RrSelection, rr_select, rrc_select
