"""minilog: an interactive, tactic-based proof assistant for minimal
first-order logic.

The pieces: `core` (syntax, substitution, alpha-equivalence), `textio`
(parsing and printing), `kernel` (derivation checking plus weakening and
grafting), `tactics` (the goal-state transition engine), `equivalence`
(scripts to derivations and back), `autoprove` (backward search), and
`cli`/`server` (command line and HTTP session service).
"""

from .core import (
    And,
    App,
    Atom,
    Exists,
    Forall,
    Formula,
    Imp,
    Or,
    Sequent,
    Term,
    Var,
    alpha_eq,
    free_vars,
    fresh_var,
    match_against,
    sequent,
    substitute,
)
from .kernel import Derivation, Justification, check_derivation, check_judgment_equal, graft, weaken
from .tactics import GoalState, Tactic, apply_tactic, replay, undo
from .equivalence import TacticTrace, derivation_to_tactics, tactics_to_derivation
from .autoprove import Found, NotFound, SearchConfig, auto_search
from .textio import (
    ScriptFile,
    TheoremFile,
    parse_derivation,
    parse_formula,
    parse_script,
    parse_theorem,
    render_derivation,
    render_formula,
    render_script,
    render_sequent,
)

__version__ = "0.1.0"
