"""Reversing Petri nets: execution, reversal semantics, and analysis.

An execution engine for Petri nets with persistent, bondable tokens whose
transitions can be undone under backtracking, causal-order, out-of-causal-
order, and collective semantics, optionally guarded by data conditions, with
bounded state-space exploration and behavioural property checking on top.
"""

from .core import (
    ArcLabel,
    Bond,
    GROUND,
    NetDef,
    NetError,
    TokenInstance,
    TokenType,
    Transition,
    VARIABLE,
    check_bond_preservation,
    components,
    connected,
    memory_contains,
    memory_drop,
    validate_net,
)
from .state import Occurrence, PlaceContent, State
from .individual import (
    BACKTRACK,
    CAUSAL,
    COLLECTIVE,
    EnablingAssignment,
    FORWARD,
    FiringRecord,
    OUT_OF_CAUSAL,
    causal_dependents,
    enabled_backtrack,
    enabled_causal,
    enabled_forward,
    enabled_out_of_causal,
    enabled_reverse,
    fire_backtrack,
    fire_causal,
    fire_forward,
    fire_out_of_causal,
    fire_reverse,
    firing_record,
    last_occurrence,
    resting_place,
)
from .collective import (
    coll_enabled_reverse,
    coll_enabled_reverse_all,
    coll_fire_forward,
    coll_fire_reverse,
)
from .conditions import (
    ConditionEvalError,
    ConditionSyntaxError,
    VariableAssignment,
    enabled_controlled,
    eval_condition,
    eval_expr,
    free_variables,
    parse_condition,
    parse_expression,
    print_condition,
)
from .netfile import NetFileError, load_net, net_from_dict, net_to_dict, save_net

__version__ = "0.1.0"
