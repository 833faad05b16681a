"""subshift_lab: 1-D sofic shift algorithmics and countable 2-D SFT constructions."""

from .sofic import (
    LabeledGraph, make_graph, empty_graph, trim, reverse,
    language_words, transition_relation, context_partition,
    context_class_count, resolve_right, resolve_left, from_forbidden_words,
    graph_to_json, graph_from_json, parse_word, format_word, language_equal,
)
from .derivative import (
    ray_cardinality, cylinder_class, derive, rank_chain, is_countable,
    cylinder_growth_oracle, growth_classification, DerivativeChain,
)
from .errors import (
    SubshiftError, InputError, ContractViolationError,
    BudgetExceededError, SimulationError, VerificationError,
)

__version__ = "0.1.0"
