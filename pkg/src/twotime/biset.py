"""Finite bisets and the commutative strong monad T = Delta . U0.

A biset is a triple ``(X0, X1, leg)`` with ``leg : X1 -> X0``.  A map of
bisets is a pair ``(h0, h1)`` making the evident square commute.  All
carriers are finite sets of hashable labels so every law can be checked by
enumeration.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, Mapping, Tuple

from .errors import CarrierTooLarge, DomainMismatch

DEFAULT_MAX_CARRIER = 4


def _order(xs: Iterable[Hashable]) -> list:
    return sorted(xs, key=repr)


class FinFunction:
    """An immutable, hashable function on a finite domain."""

    __slots__ = ("_map", "_key")

    def __init__(self, pairs: Mapping | Iterable[Tuple[Any, Any]] = ()):
        m = dict(pairs.items() if isinstance(pairs, Mapping) else pairs)
        self._map = m
        self._key = frozenset(m.items())

    @classmethod
    def identity(cls, xs: Iterable) -> "FinFunction":
        return cls((x, x) for x in xs)

    @classmethod
    def constant(cls, xs: Iterable, value) -> "FinFunction":
        return cls((x, value) for x in xs)

    @classmethod
    def of(cls, fn: Callable, xs: Iterable) -> "FinFunction":
        return cls((x, fn(x)) for x in xs)

    def __call__(self, x):
        return self._map[x]

    def __contains__(self, x) -> bool:
        return x in self._map

    @property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    def items(self):
        return self._map.items()

    def then(self, other: "FinFunction") -> "FinFunction":
        """Diagrammatic composite: first ``self``, then ``other``."""
        return FinFunction((x, other(y)) for x, y in self._map.items())

    def __eq__(self, other) -> bool:
        return isinstance(other, FinFunction) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        body = ", ".join(f"{x!r}: {y!r}" for x, y in sorted(self._map.items(), key=repr))
        return "{" + body + "}"


@dataclass(frozen=True)
class Biset:
    carrier0: frozenset
    carrier1: frozenset
    leg: FinFunction = field(compare=True)

    def __post_init__(self):
        c0, c1 = frozenset(self.carrier0), frozenset(self.carrier1)
        leg = self.leg if isinstance(self.leg, FinFunction) else FinFunction(self.leg)
        object.__setattr__(self, "carrier0", c0)
        object.__setattr__(self, "carrier1", c1)
        object.__setattr__(self, "leg", leg)
        if leg.domain != c1:
            raise DomainMismatch("leg must be defined exactly on carrier1")
        for x, y in leg.items():
            if y not in c0:
                raise DomainMismatch(f"leg({x!r}) = {y!r} is not in carrier0")

    @classmethod
    def discrete(cls, xs: Iterable) -> "Biset":
        """Delta(X) = (X, X, id)."""
        xs = frozenset(xs)
        return cls(xs, xs, FinFunction.identity(xs))

    def size(self) -> Tuple[int, int]:
        return len(self.carrier0), len(self.carrier1)

    def __repr__(self) -> str:
        return f"Biset({_order(self.carrier0)}, {_order(self.carrier1)}, {self.leg!r})"


TERMINAL = Biset(frozenset({()}), frozenset({()}), FinFunction({(): ()}))
INITIAL = Biset(frozenset(), frozenset(), FinFunction())


@dataclass(frozen=True)
class BisetMap:
    src: Biset
    dst: Biset
    h0: FinFunction
    h1: FinFunction

    def __post_init__(self):
        for name in ("h0", "h1"):
            h = getattr(self, name)
            if not isinstance(h, FinFunction):
                object.__setattr__(self, name, FinFunction(h))

    def then(self, other: "BisetMap") -> "BisetMap":
        return compose(self, other)


def validate_map(m: BisetMap) -> bool:
    """True iff the square ``dst.leg . h1 = h0 . src.leg`` commutes.

    Raises DomainMismatch when h0/h1 are not total functions between the
    carriers.
    """
    s, d = m.src, m.dst
    if m.h0.domain != s.carrier0 or m.h1.domain != s.carrier1:
        raise DomainMismatch("h0/h1 must be total on the source carriers")
    if any(y not in d.carrier0 for _, y in m.h0.items()):
        raise DomainMismatch("h0 leaves dst.carrier0")
    if any(y not in d.carrier1 for _, y in m.h1.items()):
        raise DomainMismatch("h1 leaves dst.carrier1")
    return all(d.leg(m.h1(x)) == m.h0(s.leg(x)) for x in s.carrier1)


def identity(a: Biset) -> BisetMap:
    return BisetMap(a, a, FinFunction.identity(a.carrier0), FinFunction.identity(a.carrier1))


def compose(m1: BisetMap, m2: BisetMap) -> BisetMap:
    """``m2 . m1``: first m1, then m2."""
    if m1.dst != m2.src:
        raise DomainMismatch("maps are not composable")
    return BisetMap(m1.src, m2.dst, m1.h0.then(m2.h0), m1.h1.then(m2.h1))


def map_distance(m1: BisetMap, m2: BisetMap) -> int:
    """Number of points at which two parallel maps disagree (0 means equal)."""
    if m1.src != m2.src or m1.dst != m2.dst:
        raise DomainMismatch("maps are not parallel")
    bad = sum(1 for x in m1.src.carrier0 if m1.h0(x) != m2.h0(x))
    bad += sum(1 for x in m1.src.carrier1 if m1.h1(x) != m2.h1(x))
    return bad


# -- cartesian structure ----------------------------------------------------


def product(a: Biset, b: Biset) -> Biset:
    c0 = frozenset(itertools.product(a.carrier0, b.carrier0))
    c1 = frozenset(itertools.product(a.carrier1, b.carrier1))
    return Biset(c0, c1, FinFunction(((x, y), (a.leg(x), b.leg(y))) for x, y in c1))


def coproduct(a: Biset, b: Biset) -> Biset:
    c0 = frozenset({(0, x) for x in a.carrier0} | {(1, y) for y in b.carrier0})
    c1 = frozenset({(0, x) for x in a.carrier1} | {(1, y) for y in b.carrier1})

    def leg(t):
        side, x = t
        return (side, (a if side == 0 else b).leg(x))

    return Biset(c0, c1, FinFunction.of(leg, c1))


def product_map(m1: BisetMap, m2: BisetMap) -> BisetMap:
    src, dst = product(m1.src, m2.src), product(m1.dst, m2.dst)
    return BisetMap(
        src,
        dst,
        FinFunction.of(lambda p: (m1.h0(p[0]), m2.h0(p[1])), src.carrier0),
        FinFunction.of(lambda p: (m1.h1(p[0]), m2.h1(p[1])), src.carrier1),
    )


def projection1(a: Biset, b: Biset) -> BisetMap:
    src = product(a, b)
    return BisetMap(src, a, FinFunction.of(lambda p: p[0], src.carrier0),
                    FinFunction.of(lambda p: p[0], src.carrier1))


def projection2(a: Biset, b: Biset) -> BisetMap:
    src = product(a, b)
    return BisetMap(src, b, FinFunction.of(lambda p: p[1], src.carrier0),
                    FinFunction.of(lambda p: p[1], src.carrier1))


def associator(a: Biset, b: Biset, c: Biset) -> BisetMap:
    """(A x B) x C -> A x (B x C)."""
    src, dst = product(product(a, b), c), product(a, product(b, c))
    reassoc = lambda p: (p[0][0], (p[0][1], p[1]))  # noqa: E731
    return BisetMap(src, dst, FinFunction.of(reassoc, src.carrier0),
                    FinFunction.of(reassoc, src.carrier1))


def swap(a: Biset, b: Biset) -> BisetMap:
    src, dst = product(a, b), product(b, a)
    flip = lambda p: (p[1], p[0])  # noqa: E731
    return BisetMap(src, dst, FinFunction.of(flip, src.carrier0), FinFunction.of(flip, src.carrier1))


# -- enumeration and exponentials -------------------------------------------


def functions(xs: Iterable, ys: Iterable) -> Iterator[FinFunction]:
    """All functions between two finite sets, in a deterministic order."""
    xs, ys = _order(xs), _order(ys)
    for values in itertools.product(ys, repeat=len(xs)):
        yield FinFunction(zip(xs, values))


def hom_set(a: Biset, b: Biset) -> Iterator[BisetMap]:
    """Every biset map ``a -> b``."""
    xs1 = _order(a.carrier1)
    fibres: Dict[Any, list] = {}
    for y in _order(b.carrier1):
        fibres.setdefault(b.leg(y), []).append(y)
    for h0 in functions(a.carrier0, b.carrier0):
        choices = [fibres.get(h0(a.leg(x)), []) for x in xs1]
        for values in itertools.product(*choices):
            yield BisetMap(a, b, h0, FinFunction(zip(xs1, values)))


def _guard(*bisets: Biset, max_carrier: int) -> None:
    for s in bisets:
        if max(s.size()) > max_carrier:
            raise CarrierTooLarge(f"carrier sizes {s.size()} exceed {max_carrier}")


def exponential(a: Biset, b: Biset, max_carrier: int = DEFAULT_MAX_CARRIER) -> Biset:
    """The internal hom ``a => b``.

    Degree 0 holds all functions ``a0 -> b0``; degree 1 holds the pairs
    ``(h0, h1)`` forming valid biset maps; the leg forgets ``h1``.
    """
    _guard(a, b, max_carrier=max_carrier)
    c0 = frozenset(functions(a.carrier0, b.carrier0))
    c1 = frozenset((m.h0, m.h1) for m in hom_set(a, b))
    return Biset(c0, c1, FinFunction((h, h[0]) for h in c1))


def evaluation(a: Biset, b: Biset, max_carrier: int = DEFAULT_MAX_CARRIER) -> BisetMap:
    """``ev : (a => b) x a -> b``."""
    src = product(exponential(a, b, max_carrier), a)
    return BisetMap(
        src,
        b,
        FinFunction.of(lambda p: p[0](p[1]), src.carrier0),
        FinFunction.of(lambda p: p[0][1](p[1]), src.carrier1),
    )


def curry(m: BisetMap, p: Biset, a: Biset, max_carrier: int = DEFAULT_MAX_CARRIER) -> BisetMap:
    """Transpose ``m : p x a -> b`` to ``p -> (a => b)``."""
    b = m.dst
    if m.src != product(p, a):
        raise DomainMismatch("curry expects a map out of p x a")
    exp = exponential(a, b, max_carrier)

    def at0(x0):
        return FinFunction.of(lambda y0: m.h0((x0, y0)), a.carrier0)

    def at1(x1):
        return (at0(p.leg(x1)), FinFunction.of(lambda y1: m.h1((x1, y1)), a.carrier1))

    return BisetMap(p, exp, FinFunction.of(at0, p.carrier0), FinFunction.of(at1, p.carrier1))


def uncurry(m: BisetMap, a: Biset, b: Biset, max_carrier: int = DEFAULT_MAX_CARRIER) -> BisetMap:
    """Inverse of :func:`curry`: ``p -> (a => b)`` becomes ``p x a -> b``."""
    return compose(product_map(m, identity(a)), evaluation(a, b, max_carrier))


# -- the monad T = Delta . U0 -----------------------------------------------


def monad_T(a: Biset) -> Biset:
    return Biset.discrete(a.carrier0)


def T_map(m: BisetMap) -> BisetMap:
    """Action of T on maps: ``(h0, h1) |-> (h0, h0)``."""
    return BisetMap(monad_T(m.src), monad_T(m.dst), m.h0, m.h0)


def unit_eta(a: Biset) -> BisetMap:
    return BisetMap(a, monad_T(a), FinFunction.identity(a.carrier0), a.leg)


def mult_mu(a: Biset) -> BisetMap:
    ta = monad_T(a)
    return BisetMap(monad_T(ta), ta, FinFunction.identity(a.carrier0),
                    FinFunction.identity(a.carrier0))


def strength_t(a: Biset, b: Biset) -> BisetMap:
    """``a x Tb -> T(a x b)`` given by ``(id, leg_a x id)``."""
    src, dst = product(a, monad_T(b)), monad_T(product(a, b))
    return BisetMap(
        src,
        dst,
        FinFunction.identity(src.carrier0),
        FinFunction.of(lambda p: (a.leg(p[0]), p[1]), src.carrier1),
    )


def costrength_s(a: Biset, b: Biset) -> BisetMap:
    """``Ta x b -> T(a x b)`` given by ``(id, id x leg_b)``."""
    src, dst = product(monad_T(a), b), monad_T(product(a, b))
    return BisetMap(
        src,
        dst,
        FinFunction.identity(src.carrier0),
        FinFunction.of(lambda p: (p[0], b.leg(p[1])), src.carrier1),
    )


# -- enumeration of small bisets ---------------------------------------------


def all_bisets(max_carrier: int) -> Iterator[Biset]:
    """Every biset on carriers ``range(n0)``/``range(n1)`` with n0, n1 <= max."""
    for n0 in range(max_carrier + 1):
        for n1 in range(max_carrier + 1):
            if n0 == 0 and n1 > 0:
                continue
            c0, c1 = range(n0), [("x", i) for i in range(n1)]
            for leg in functions(c1, c0):
                yield Biset(frozenset(c0), frozenset(c1), leg)


def _fibre_shapes(n1: int, n0: int, cap: int | None = None) -> Iterator[tuple]:
    cap = n1 if cap is None else cap
    if n0 == 0:
        if n1 == 0:
            yield ()
        return
    for first in range(min(n1, cap), -1, -1):
        for rest in _fibre_shapes(n1 - first, n0 - 1, first):
            yield (first,) + rest


def biset_iso_classes(max_carrier: int) -> Iterator[Biset]:
    """One representative per isomorphism class of bisets with carriers <= max.

    A biset is determined up to isomorphism by the multiset of fibre sizes
    of its leg, so classes correspond to partitions of n1 into n0 parts.
    """
    for n0 in range(max_carrier + 1):
        for n1 in range(max_carrier + 1):
            for shape in _fibre_shapes(n1, n0):
                pairs, k = [], 0
                for target, size in enumerate(shape):
                    for _ in range(size):
                        pairs.append((("x", k), target))
                        k += 1
                yield Biset(frozenset(range(n0)), frozenset(x for x, _ in pairs), FinFunction(pairs))
