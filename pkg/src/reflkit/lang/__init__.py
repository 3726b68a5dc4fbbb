from .machine import evaluate, evaluate_counted
from .syntax import ParseError, parse, parse_value, print_code, print_term, print_value
from .terms import *  # noqa: F403
from .terms import lift, size, term_eq
