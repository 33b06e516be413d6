"""Van Kampen diagram construction, surgery and diameter measurement."""

from .words import (Alphabet, Word, LetterMap, free_reduce, exponent_sum,
                    letter_count, map_word, cyclic_conjugates)
from .presentations import Presentation, build_presentation, retraction
from .models import (GroupElement, GroupModel, FreeAbelianModel, FreeModel,
                     ThetaModel, BmModel, FreeProductZZkModel,
                     cayley_distance, cayley_ball, is_power_of,
                     model_for_presentation)
from .diagrams import Diagram, validate, to_text, from_text, single_vertex_diagram
from .surgery import (Scheme, lollipop, fold, mirror, project, sew,
                      collapse_islands, diamond_move, excise_and_glue)

__all__ = [name for name in dir() if not name.startswith("_")]
