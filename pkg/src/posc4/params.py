from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .errors import InvalidParameterError

C4_ALPHA = 2.0 / 3.0


@dataclass(frozen=True)
class GameParams:
    """Board size, Breaker bias and the strategy constants.

    ``q`` is the literal per-round Breaker budget.  Use :meth:`from_c` to
    derive it as ``floor(c * n**alpha)``.  When only ``q`` is known, ``c`` is
    back-filled as ``q / n**alpha`` so the bias-dependent bounds stay defined.
    """

    n: int
    q: int
    c: float
    delta: float = 1.1
    alpha: float = C4_ALPHA
    beta: float = 0.7
    seed: int = 0
    q_literal: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.q < 0:
            raise InvalidParameterError(f"q must be >= 0, got {self.q}")
        if not 0 < self.alpha < 1:
            raise InvalidParameterError(f"alpha must lie in (0, 1), got {self.alpha}")

    @classmethod
    def from_c(cls, n: int, c: float, **kw) -> "GameParams":
        alpha = kw.get("alpha", C4_ALPHA)
        return cls(n=n, q=math.floor(c * n**alpha), c=c, **kw)

    @classmethod
    def from_q(cls, n: int, q: int, **kw) -> "GameParams":
        alpha = kw.get("alpha", C4_ALPHA)
        return cls(n=n, q=q, c=q / n**alpha, q_literal=True, **kw)

    @property
    def degree_target(self) -> float:
        """Real-valued target degree delta * n^(1 - alpha)."""
        return self.delta * self.n ** (1.0 - self.alpha)

    @property
    def d_hat(self) -> int:
        """Working integer degree cap."""
        return math.ceil(self.degree_target)

    @property
    def danger_threshold(self) -> float:
        # exponent fixed at the C4 instantiation, independent of alpha
        return self.delta**2 * self.n ** (2.0 / 3.0) - 1.0

    @property
    def x_target(self) -> int:
        return math.ceil(self.beta * self.n)

    @property
    def round_bound(self) -> float:
        """(delta / 2) * n^(2 - alpha): Maker moves allowed for the degree phase."""
        return self.delta / 2.0 * self.n ** (2.0 - self.alpha)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("q_literal")
        return d
