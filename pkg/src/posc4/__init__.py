"""Biased Maker-Breaker C4 game on K_n: board, threats, strategies, referee."""

from .analysis import LemmaReport, lemma_report, theorem2_check
from .engine import (
    GameResult,
    Transcript,
    min_valid_n,
    play_game,
    replay,
    run_game,
    validate_params,
)
from .graph_core import BoardState, Edge, Ownership, edge_endpoints, edge_id, new_board
from .params import GameParams
from .strategies import (
    breaker_deactivator,
    breaker_degree_attack,
    breaker_random,
    maker_c4_move,
    maker_ddegree_move,
    make_breaker,
    make_maker,
)
from .threat_index import (
    ThreatClass,
    classify,
    completes_c4,
    contains_c4,
    dangerous_partition,
    threat_count_fast,
    threats_of_oracle,
    uncovered_threat_count,
)

__version__ = "0.1.0"

__all__ = [
    "BoardState", "Edge", "GameParams", "GameResult", "LemmaReport", "Ownership", "ThreatClass", "Transcript",
    "breaker_deactivator", "breaker_degree_attack", "breaker_random", "classify", "completes_c4", "contains_c4",
    "dangerous_partition", "edge_endpoints", "edge_id", "lemma_report", "make_breaker", "make_maker",
    "maker_c4_move", "maker_ddegree_move", "min_valid_n", "new_board", "play_game", "replay", "run_game",
    "theorem2_check", "threat_count_fast", "threats_of_oracle", "uncovered_threat_count", "validate_params",
]
