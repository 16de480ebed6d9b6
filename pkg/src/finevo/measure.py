"""Exact rational probability measures on finite carriers.

Measures are sparse: only the support is stored, every stored weight is a
positive ``Fraction`` and the weights sum to exactly 1. Carriers are either
transformations (measures on a semigroup) or point tuples (multiparticle
laws); the convolution/action operators dispatch on the support type.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError
from .transform import Transformation


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like "2/3" and Fractions; floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational literal {value!r}") from exc
    raise InputError(f"expected an exact rational, got {type(value).__name__}")


class RationalMeasure:
    """Finitely supported probability measure with exact rational weights."""

    __slots__ = ("_w",)

    def __init__(self, weights):
        w = {}
        for x, v in dict(weights).items():
            v = as_fraction(v)
            if v < 0:
                raise InputError(f"negative weight {v} at {x!r}")
            if v > 0:
                w[x] = w.get(x, Fraction(0)) + v
        if not w:
            raise InputError("measure needs a nonempty support")
        if sum(w.values()) != 1:
            raise InputError(f"weights sum to {sum(w.values())}, expected 1")
        self._w = w

    @classmethod
    def point(cls, x) -> "RationalMeasure":
        """Dirac mass at x."""
        m = object.__new__(cls)
        m._w = {x: Fraction(1)}
        return m

    @classmethod
    def uniform(cls, support) -> "RationalMeasure":
        """Uniform law (normalized Haar measure for a finite group)."""
        items = list(dict.fromkeys(support))
        if not items:
            raise InputError("uniform law needs a nonempty support")
        w = Fraction(1, len(items))
        m = object.__new__(cls)
        m._w = {x: w for x in items}
        return m

    @classmethod
    def mix(cls, terms) -> "RationalMeasure":
        """Convex combination of measures: terms are (coefficient, measure)."""
        acc = {}
        total = Fraction(0)
        for c, m in terms:
            c = as_fraction(c)
            if c < 0:
                raise InputError(f"negative mixture coefficient {c}")
            total += c
            if c == 0:
                continue
            for x, v in m._w.items():
                acc[x] = acc.get(x, Fraction(0)) + c * v
        if total != 1:
            raise InputError(f"mixture coefficients sum to {total}, expected 1")
        return cls(acc)

    def support(self) -> list:
        return sorted(self._w)

    def items(self):
        """Deterministically ordered (element, weight) pairs."""
        return [(x, self._w[x]) for x in sorted(self._w)]

    def __getitem__(self, x) -> Fraction:
        return self._w.get(x, Fraction(0))

    def __contains__(self, x) -> bool:
        return x in self._w

    def __len__(self) -> int:
        return len(self._w)

    def __eq__(self, other):
        return isinstance(other, RationalMeasure) and self._w == other._w

    def __mul__(self, other):
        if isinstance(other, Transformation):
            other = RationalMeasure.point(other)
        elif isinstance(other, tuple):
            other = RationalMeasure.point(other)
        if not isinstance(other, RationalMeasure):
            return NotImplemented
        if isinstance(next(iter(other._w)), Transformation):
            return convolve(self, other)
        return act_on_tuples(self, other)

    def __rmul__(self, other):
        if isinstance(other, (Transformation, tuple)):
            return RationalMeasure.point(other).__mul__(self)
        return NotImplemented

    def sup_distance(self, other: "RationalMeasure") -> Fraction:
        keys = set(self._w) | set(other._w)
        return max(abs(self[x] - other[x]) for x in keys)

    def to_floats(self) -> dict:
        return {x: float(v) for x, v in self._w.items()}

    def __repr__(self):
        parts = ", ".join(f"{x!r}: {v}" for x, v in self.items())
        return f"RationalMeasure({{{parts}}})"


def _domain_size(measure: RationalMeasure) -> int:
    if not all(isinstance(f, Transformation) for f in measure._w):
        raise InputError("expected a measure supported on transformations")
    sizes = {f.n for f in measure._w}
    if len(sizes) != 1:
        raise InputError("measure mixes transformations of different domains")
    return sizes.pop()


def convolve(a: RationalMeasure, b: RationalMeasure) -> RationalMeasure:
    """Exact pushforward of the product measure under composition."""
    if _domain_size(a) != _domain_size(b):
        raise InputError("convolution of measures over different domains")
    acc = {}
    for f, wf in a.items():
        for g, wg in b.items():
            z = f * g
            acc[z] = acc.get(z, Fraction(0)) + wf * wg
    return RationalMeasure(acc)


def act_on_tuples(mu: RationalMeasure, lam: RationalMeasure) -> RationalMeasure:
    """Push a tuple law forward under a random map with law mu."""
    n = _domain_size(mu)
    acc = {}
    for f, wf in mu.items():
        for x, wx in lam.items():
            if max(x) > n:
                raise InputError("tuple entry outside the mapping domain")
            y = f.apply(x)
            acc[y] = acc.get(y, Fraction(0)) + wf * wx
    return RationalMeasure(acc)


def measure_product(pieces) -> RationalMeasure:
    """Left-to-right product of measures and/or point elements.

    Transformations and tuples are treated as Dirac masses. A tuple-supported
    piece may only appear last; from there on the product acts on tuple laws.
    """
    if not pieces:
        raise InputError("empty product")
    result = None
    for piece in pieces:
        if isinstance(piece, (Transformation, tuple)):
            piece = RationalMeasure.point(piece)
        if result is None:
            result = piece
        else:
            result = result * piece
    return result


def coordinate_marginal(lam: RationalMeasure, i: int) -> RationalMeasure:
    """Marginal law of the i-th coordinate (1-based) of a tuple law."""
    acc = {}
    for x, w in lam.items():
        acc[x[i - 1]] = acc.get(x[i - 1], Fraction(0)) + w
    return RationalMeasure(acc)


def marginal_transition_matrix(law: "MappingLaw") -> list:
    """Row-stochastic matrix P[x][y] = mu{f : f(x) = y}, 0-indexed rows."""
    n = law.n
    rows = []
    for x in range(1, n + 1):
        row = [Fraction(0)] * n
        for f, w in law.measure.items():
            row[f(x) - 1] += w
        rows.append(row)
    return rows


class MappingLaw:
    """A rational probability on transformations of one finite set."""

    __slots__ = ("n", "measure")

    def __init__(self, n: int, measure: RationalMeasure):
        if not isinstance(n, int) or n < 1:
            raise InputError("domain size must be a positive integer")
        for f in measure.support():
            if not isinstance(f, Transformation) or f.n != n:
                raise InputError("law support must be transformations of {1..%d}" % n)
        self.n = n
        self.measure = measure

    @property
    def generators(self) -> list:
        return self.measure.support()

    @classmethod
    def from_dict(cls, obj: dict) -> "MappingLaw":
        """Parse the law file format:
        {"n": 5, "generators": [[2,3,4,1,5], [2,5,5,2,4]], "weights": ["1/2","1/2"]}
        """
        try:
            n = obj["n"]
            gens = obj["generators"]
            weights = obj["weights"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"law file missing field: {exc}") from exc
        if not isinstance(gens, list) or not gens:
            raise InputError("generators must be a nonempty list")
        if not isinstance(weights, list) or len(weights) != len(gens):
            raise InputError("weights must match generators one to one")
        acc = {}
        for images, w in zip(gens, weights):
            f = Transformation(images)
            if f.n != n:
                raise InputError(f"generator {f.literal()} has domain {f.n}, expected {n}")
            v = as_fraction(w)
            if v <= 0:
                raise InputError(f"weight {w!r} must be positive")
            acc[f] = acc.get(f, Fraction(0)) + v
        total = sum(acc.values())
        if total != 1:
            raise InputError(f"weights sum to {total}, expected 1")
        return cls(n, RationalMeasure(acc))

    def to_dict(self) -> dict:
        gens = self.measure.support()
        return {
            "n": self.n,
            "generators": [list(f.images) for f in gens],
            "weights": [str(self.measure[f]) for f in gens],
        }

    def __eq__(self, other):
        return (
            isinstance(other, MappingLaw)
            and self.n == other.n
            and self.measure == other.measure
        )

    def __repr__(self):
        return f"MappingLaw(n={self.n}, support={[f.literal() for f in self.generators]})"
