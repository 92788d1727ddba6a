"""Coefficient rings: the integers, the rationals and prime fields."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Ring:
    """One of ``Z``, ``Q`` or ``F_p``.

    Scalars are plain Python objects: ``int`` for Z, ``Fraction`` for Q and
    ``int`` in ``[0, p)`` for F_p.  Calling the ring normalizes a value.
    """

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "F" and not _is_prime(self.p):
            raise ValueError(f"F_p needs a prime p, got {self.p}")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip().upper().replace("_", "")
        if t in ("Z", "ZZ"):
            return ZZ
        if t in ("Q", "QQ"):
            return QQ
        m = re.fullmatch(r"(?:F|GF|Z/)\(?(\d+)\)?", t)
        if m:
            return Ring("F", int(m.group(1)))
        raise ValueError(f"cannot parse ring {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __str__(self):
        return f"F_{self.p}" if self.kind == "F" else self.kind

    def __call__(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x == 1 or x == -1
        return x != 0

    def inv(self, x):
        if self.kind == "Z":
            if x not in (1, -1):
                raise ZeroDivisionError(f"{x} is not a unit in Z")
            return x
        if self.kind == "Q":
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def divide(self, a, b):
        """Exact quotient a/b, or ``None`` when b does not divide a."""
        if b == 0:
            return 0 if a == 0 else None
        if self.kind == "Z":
            q, r = divmod(a, b)
            return q if r == 0 else None
        if self.kind == "Q":
            return Fraction(a) / b
        return a * pow(b, -1, self.p) % self.p


ZZ = Ring("Z")
QQ = Ring("Q")
F2 = Ring("F", 2)


def GF(p: int) -> Ring:
    return Ring("F", p)
