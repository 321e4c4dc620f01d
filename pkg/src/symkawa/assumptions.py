"""Sign and domain facts attached to expressions and equation instances.

Facts are deliberately minimal: `name > 0` and `name != 0` for symbols
(t, x, u or parameters).  They are only consulted to license power
collisions such as t^a * t^b -> t^(a+b) and (t^2)^(1/2) -> t.
"""

from fractions import Fraction


class AssumptionError(ValueError):
    pass


class AssumptionSet:
    """Immutable set of facts; `positive` implies `nonzero`."""

    __slots__ = ("positive", "nonzero")

    def __init__(self, positive=(), nonzero=()):
        self.positive = frozenset(positive)
        self.nonzero = frozenset(nonzero) | self.positive
        self._validate()

    def _validate(self):
        for name in self.positive | self.nonzero:
            if not isinstance(name, str) or not name:
                raise AssumptionError(f"bad assumption subject {name!r}")

    def is_positive(self, name):
        return name in self.positive

    def is_nonzero(self, name):
        return name in self.nonzero

    def union(self, other):
        return AssumptionSet(self.positive | other.positive, self.nonzero | other.nonzero)

    def with_positive(self, *names):
        return AssumptionSet(self.positive | set(names), self.nonzero)

    def with_nonzero(self, *names):
        return AssumptionSet(self.positive, self.nonzero | set(names))

    def __eq__(self, other):
        return (
            isinstance(other, AssumptionSet)
            and self.positive == other.positive
            and self.nonzero == other.nonzero
        )

    def __hash__(self):
        return hash((self.positive, self.nonzero))

    def __repr__(self):
        bits = [f"{n}>0" for n in sorted(self.positive)]
        bits += [f"{n}!=0" for n in sorted(self.nonzero - self.positive)]
        return "AssumptionSet(" + ", ".join(bits) + ")"

    @classmethod
    def parse(cls, facts):
        """Build from strings like "t>0", "u > 0", "n != 0", "lambda<>0"."""
        positive, nonzero = set(), set()
        for raw in facts:
            s = raw.replace(" ", "")
            if s.endswith(">0"):
                positive.add(s[:-2])
            elif s.endswith("!=0") or s.endswith("<>0"):
                nonzero.add(s[: s.index("!") if "!" in s else s.index("<")])
            else:
                raise AssumptionError(f"unrecognized assumption {raw!r}")
        return cls(positive, nonzero)

    def to_strings(self):
        out = [f"{n}>0" for n in sorted(self.positive)]
        out += [f"{n}!=0" for n in sorted(self.nonzero - self.positive)]
        return out


EMPTY = AssumptionSet()


def sample_interval(name, assumptions):
    """Interval from which numeric probes for `name` are drawn."""
    if assumptions.is_positive(name):
        return (0.25, 2.75)
    return (-2.5, 2.5)


def rational_in(lo, hi, rng, den=8):
    """Random Fraction in [lo, hi] with a small denominator."""
    n_lo, n_hi = int(lo * den), int(hi * den)
    return Fraction(rng.randint(n_lo, n_hi), den)
