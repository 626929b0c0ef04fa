from __future__ import annotations

from dataclasses import dataclass

from pauli.conf import bh_bound as configured_bh_bound
from pauli.exceptions import InputError


@dataclass(frozen=True)
class LearnerConfig:
    """Accuracy target and overrides for one learning run.

    ``bh_bound`` stands in for the Boolean BH constant of degree ``d`` and defaults to
    the configured table. ``n_override`` and ``b_override`` replace the theoretical
    sample count and threshold; ``a_override`` switches to the two-threshold rule.
    """

    n: int
    d: int
    eps: float
    delta: float
    bh_bound: float | None = None
    n_override: int | None = None
    b_override: float | None = None
    a_override: float | None = None
    noise_std: float = 0.0

    def __post_init__(self) -> None:
        if not 1 <= self.d <= self.n:
            raise InputError(f'need 1 <= d <= n, got n={self.n}, d={self.d}')
        if not 0.0 < self.eps < 1.0:
            raise InputError(f'eps must lie in (0, 1), got {self.eps}')
        if not 0.0 < self.delta < 1.0:
            raise InputError(f'delta must lie in (0, 1), got {self.delta}')
        if self.bh_bound is None:
            object.__setattr__(self, 'bh_bound', configured_bh_bound(self.d))
        if self.bh_bound < 1.0:
            raise InputError(f'bh_bound must be >= 1, got {self.bh_bound}')
        if self.n_override is not None and self.n_override < 1:
            raise InputError(f'n_override must be a positive integer, got {self.n_override}')
        if self.b_override is not None and self.b_override <= 0.0:
            raise InputError(f'b_override must be positive, got {self.b_override}')
        if self.a_override is not None and self.a_override <= 0.0:
            raise InputError(f'a_override must be positive, got {self.a_override}')
        if self.noise_std < 0.0:
            raise InputError(f'noise_std must be nonnegative, got {self.noise_std}')
