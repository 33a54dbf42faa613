"""Run parameters shared by every layer."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .exact import rat, rat_str


class ConfigError(ValueError):
    pass


KINDS = ("o", "sp")


@dataclass(frozen=True)
class AlgebraContext:
    """N, the type (o or sp), the level c and the truncation orders.

    K: h-order (exclusive), D: module degree bound, U: u-power bound,
    M: order of the normalizing series.
    """

    N: int
    kind: str = "o"
    level: Fraction | None = None
    K: int = 2
    D: int = 3
    U: int = 2
    M: int = 8
    eps: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not isinstance(self.N, int) or self.N < 2:
            raise ConfigError("N must be an integer >= 2")
        if self.kind == "sp" and self.N % 2:
            raise ConfigError("the symplectic case needs even N")
        for name in ("K", "D", "U", "M"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ConfigError(f"{name} must be a nonnegative integer")
        if self.K < 1:
            raise ConfigError("K must be at least 1")
        lv = self.critical_level() if self.level is None else rat(self.level)
        object.__setattr__(self, "level", lv)
        if self.kind == "o":
            e = (1,) * self.N
        else:
            e = tuple(1 if i < self.N // 2 else -1 for i in range(self.N))
        object.__setattr__(self, "eps", e)

    # indices are 0-based internally: i' = N-1-i
    def prime(self, i: int) -> int:
        return self.N - 1 - i

    @property
    def kappa(self) -> Fraction:
        half = Fraction(self.N, 2)
        return half - 1 if self.kind == "o" else half + 1

    @property
    def sigma(self) -> int:
        return 1 if self.kind == "o" else 2

    @property
    def sign(self) -> int:
        """+1 for o, -1 for sp; the P-sign in the symmetrizer representation."""
        return 1 if self.kind == "o" else -1

    def critical_level(self) -> Fraction:
        half = Fraction(self.N, 2)
        kappa = half - 1 if self.kind == "o" else half + 1
        sigma = 1 if self.kind == "o" else 2
        return -2 * kappa / sigma

    @property
    def c_crit(self) -> Fraction:
        return self.critical_level()

    @property
    def is_critical(self) -> bool:
        return self.level == self.c_crit

    def with_(self, **kw) -> "AlgebraContext":
        return replace(self, **kw)

    @property
    def label(self) -> str:
        return f"{self.kind}{self.N}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "N": self.N, "level": rat_str(self.level),
                "K": self.K, "D": self.D, "U": self.U, "M": self.M}
