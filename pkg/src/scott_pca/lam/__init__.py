from .combinators import (
    FALSE, TRUE, decode_tuple, numeral, pair_values, pairing, std_combinators, tuple_code,
    tuple_concat, tuple_len, tuple_proj, tuple_value,
)
from .semantics import UnboundVariable, beta_equiv_check, evaluate, interpret
from .syntax import (
    App, Const, Lam, NumLit, SetLit, Term, TermSyntaxError, TupleLit, Var, beta_step, free_vars,
    parse_term, show, substitute, term_from_json, term_to_json,
)
