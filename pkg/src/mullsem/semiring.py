"""Continuous semirings: Bool, completed naturals, completed non-negative reals.

The multiplication convention is 0 * inf = 0 and x * inf = inf for
x > 0, which keeps matrix composition total.  The real semiring works
on exact rationals by default and has an inexact floating mode used
only by the fixpoint iterator.
"""

from __future__ import annotations

from fractions import Fraction


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class Semiring:
    """Ordered semiring with suprema of ascending sequences."""

    name = "semiring"
    zero = None
    one = None

    def is_value(self, v) -> bool:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def le(self, a, b) -> bool:
        raise NotImplementedError

    def chain_sup(self, values):
        """Supremum of a finite ascending sequence (its last element)."""
        values = list(values)
        if not values:
            return self.zero
        return values[-1]

    def parse(self, text: str):
        raise NotImplementedError

    def to_str(self, v) -> str:
        return "inf" if v is INF else str(v)

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def sample_values(self):
        raise NotImplementedError

    def __repr__(self):
        return f"Semiring({self.name})"


class BoolSemiring(Semiring):
    name = "bool"
    zero = False
    one = True

    def is_value(self, v):
        return isinstance(v, bool)

    def add(self, a, b):
        return a or b

    def mul(self, a, b):
        return a and b

    def le(self, a, b):
        return (not a) or b

    def parse(self, text):
        if text in ("0", "false"):
            return False
        if text in ("1", "true"):
            return True
        raise ValueError(f"not a boolean scalar: {text!r}")

    def to_str(self, v):
        return "1" if v else "0"

    def sample_values(self):
        return [False, True]


class _ExtendedNumeric(Semiring):
    """Shared arithmetic for the completed numeric semirings."""

    def add(self, a, b):
        if a is INF or b is INF:
            return INF
        return a + b

    def mul(self, a, b):
        if a == self.zero or b == self.zero:
            return self.zero
        if a is INF or b is INF:
            return INF
        return a * b

    def le(self, a, b):
        if b is INF:
            return True
        if a is INF:
            return False
        return a <= b


class NInfSemiring(_ExtendedNumeric):
    name = "ninf"
    zero = 0
    one = 1

    def is_value(self, v):
        return v is INF or (isinstance(v, int) and not isinstance(v, bool)
                            and v >= 0)

    def parse(self, text):
        if text == "inf":
            return INF
        n = int(text)
        if n < 0:
            raise ValueError(f"negative value {n} is not in the semiring")
        return n

    def sample_values(self):
        return [0, 1, 2, 3, 7, INF]


class RInfSemiring(_ExtendedNumeric):
    name = "rinf"
    zero = Fraction(0)
    one = Fraction(1)

    def is_value(self, v):
        return v is INF or (isinstance(v, Fraction) and v >= 0)

    def parse(self, text):
        if text == "inf":
            return INF
        v = Fraction(text)
        if v < 0:
            raise ValueError(f"negative value {v} is not in the semiring")
        return v

    def sample_values(self):
        return [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2),
                Fraction(7, 3), INF]


class RFloatSemiring(_ExtendedNumeric):
    """Inexact floating twin of the completed reals (fixpoint mode only)."""

    name = "rinf-float"
    zero = 0.0
    one = 1.0

    def is_value(self, v):
        return isinstance(v, float) and v >= 0.0

    def add(self, a, b):
        a = float("inf") if a is INF else a
        b = float("inf") if b is INF else b
        return a + b

    def mul(self, a, b):
        if a == 0.0 or b == 0.0:
            return 0.0
        a = float("inf") if a is INF else a
        b = float("inf") if b is INF else b
        return a * b

    def le(self, a, b):
        a = float("inf") if a is INF else a
        b = float("inf") if b is INF else b
        return a <= b

    def parse(self, text):
        if text == "inf":
            return float("inf")
        v = float(Fraction(text))
        if v < 0:
            raise ValueError(f"negative value {v} is not in the semiring")
        return v

    def sample_values(self):
        return [0.0, 0.5, 1.0, 2.5]


BOOL = BoolSemiring()
NINF = NInfSemiring()
RINF = RInfSemiring()
RFLOAT = RFloatSemiring()

SEMIRINGS = {s.name: s for s in (BOOL, NINF, RINF, RFLOAT)}


def check_semiring_laws(sr: Semiring):
    """Spot-check the semiring laws on the declared sample values."""
    vals = sr.sample_values()
    for a in vals:
        if sr.add(a, sr.zero) != a or sr.mul(a, sr.one) != a:
            raise AssertionError(f"{sr.name}: unit laws fail at {a!r}")
        if sr.mul(a, sr.zero) != sr.zero:
            raise AssertionError(f"{sr.name}: absorption fails at {a!r}")
    for a in vals:
        for b in vals:
            if sr.add(a, b) != sr.add(b, a) or sr.mul(a, b) != sr.mul(b, a):
                raise AssertionError(f"{sr.name}: commutativity fails")
            for c in vals:
                if sr.add(sr.add(a, b), c) != sr.add(a, sr.add(b, c)):
                    raise AssertionError(f"{sr.name}: + associativity fails")
                if sr.mul(sr.mul(a, b), c) != sr.mul(a, sr.mul(b, c)):
                    raise AssertionError(f"{sr.name}: * associativity fails")
                if sr.mul(a, sr.add(b, c)) != sr.add(sr.mul(a, b), sr.mul(a, c)):
                    raise AssertionError(f"{sr.name}: distributivity fails")
                if sr.le(a, b) and not sr.le(sr.add(a, c), sr.add(b, c)):
                    raise AssertionError(f"{sr.name}: + not monotone")
                if sr.le(a, b) and not sr.le(sr.mul(a, c), sr.mul(b, c)):
                    raise AssertionError(f"{sr.name}: * not monotone")
    return True
