"""Parity game solving by strategy improvement with parallel valuation."""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    GameError,
    InvariantViolation,
    NotAdmissibleError,
    ParityGameError,
    ParseError,
    SolveTimeout,
)
from .game import (
    EVEN,
    ODD,
    AugmentedGame,
    ParityGame,
    Solution,
    SolveStats,
    augment_with_sink,
    parse_pgsolver,
    parse_solution,
    preprocess_admissible,
    write_pgsolver,
    write_solution,
)
from .oracle import GeneratorSpec, gen_random_game, verify_solution, zielonka_solve
from .solver import SolveConfig, solve, solve_game
from .valuation import Valuation, val_add, val_compare

__all__ = [
    "EVEN", "ODD", "AugmentedGame", "DomainError", "GameError", "GeneratorSpec",
    "InvariantViolation", "NotAdmissibleError", "ParityGame", "ParityGameError",
    "ParseError", "Solution", "SolveConfig", "SolveStats", "SolveTimeout", "Valuation",
    "augment_with_sink", "gen_random_game", "parse_pgsolver", "parse_solution",
    "preprocess_admissible", "solve", "solve_game", "val_add", "val_compare",
    "verify_solution", "write_pgsolver", "write_solution", "zielonka_solve",
]
