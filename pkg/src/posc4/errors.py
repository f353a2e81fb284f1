class InvalidEdgeError(ValueError):
    pass


class InvalidParameterError(ValueError):
    pass


class IllegalMoveError(ValueError):
    """Raised when a claim targets an edge that already has an owner."""

    def __init__(self, edge, prior_owner):
        self.edge = edge
        self.prior_owner = prior_owner
        super().__init__(f"edge {tuple(edge)} already owned by {prior_owner.name}")


class ExhaustedBoardError(RuntimeError):
    pass


class StrategyFaultError(RuntimeError):
    def __init__(self, who: str, move, reason: str):
        self.who = who
        self.move = move
        super().__init__(f"{who} made an illegal move {move!r}: {reason}")


class NoValidNError(ValueError):
    pass


class NotApplicableError(ValueError):
    pass
