from .categories import (
    AFFORDANCES,
    ALLOWED_ATTRIBUTES,
    AffordanceProfile,
    CATEGORY_SET,
    OBJECT_CATEGORIES,
    POUR_DISCARD,
    SLICE_PARENT,
    SLICED_PRODUCT,
    affordance,
    is_known_category,
)
from .parser import ParseError, parse_program
from .program import (
    ActionProgram,
    Call,
    CORRECTIVE_METHODS,
    CorrectiveCall,
    HANDLE_ARG_METHODS,
    Instantiate,
    INTERACTION_METHODS,
    Statement,
    render_program,
    render_statement,
)
from .validator import (
    RULE_AFFORDANCE,
    RULE_DOUBLE_OPEN,
    RULE_DOUBLE_TOGGLE,
    RULE_HOLD_FLOW,
    RULE_WHITELIST,
    Violation,
    validate_program,
)

__all__ = [
    "AFFORDANCES", "ALLOWED_ATTRIBUTES", "AffordanceProfile", "CATEGORY_SET",
    "OBJECT_CATEGORIES", "POUR_DISCARD", "SLICE_PARENT", "SLICED_PRODUCT",
    "affordance", "is_known_category", "ParseError", "parse_program",
    "ActionProgram", "Call", "CORRECTIVE_METHODS", "CorrectiveCall",
    "HANDLE_ARG_METHODS", "Instantiate", "INTERACTION_METHODS", "Statement",
    "render_program", "render_statement", "RULE_AFFORDANCE",
    "RULE_DOUBLE_OPEN", "RULE_DOUBLE_TOGGLE", "RULE_HOLD_FLOW",
    "RULE_WHITELIST", "Violation", "validate_program",
]
