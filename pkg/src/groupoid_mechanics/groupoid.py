"""Finite groupoids as exhaustive transition tables.

A groupoid is a set of transitions (morphisms) between outcomes (objects),
with a partially defined associative composition, a unit transition per
object, and an inverse for every transition.  Everything here is finite and
table-driven, so all axioms can be checked exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "FiniteGroupoid",
    "Measure",
    "GroupoidFunction",
    "GroupoidViolation",
    "GroupoidValidationReport",
    "build_pair_groupoid",
    "build_group_groupoid",
    "cyclic_cayley_table",
    "validate_groupoid",
    "counting_measure",
    "unit_indicator",
]


class FiniteGroupoid:
    """A finite groupoid stored as explicit index tables.

    ``compose[(later, first)]`` is the transition "``first``, then
    ``later``"; it is defined exactly when ``target[first] ==
    source[later]``.  Construction only checks that the tables are
    well-formed (index ranges, declared domains); the groupoid axioms
    themselves are checked by :func:`validate_groupoid`.

    Instances are immutable after construction and safe to share between
    threads.
    """

    def __init__(
        self,
        objects: Sequence[str],
        morphisms: Sequence[str],
        source: Sequence[int],
        target: Sequence[int],
        compose: Mapping[tuple[int, int], int],
        inverse: Sequence[int],
        unit: Sequence[int],
    ):
        self.objects = tuple(str(o) for o in objects)
        self.morphisms = tuple(str(m) for m in morphisms)
        if not self.objects:
            raise ValueError("a groupoid needs at least one object")
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object labels")
        if len(set(self.morphisms)) != len(self.morphisms):
            raise ValueError("duplicate morphism labels")

        n_obj, n_mor = len(self.objects), len(self.morphisms)
        self.source = self._index_tuple(source, n_mor, n_obj, "source")
        self.target = self._index_tuple(target, n_mor, n_obj, "target")
        self.inverse = self._index_tuple(inverse, n_mor, n_mor, "inverse")
        self.unit = self._index_tuple(unit, n_obj, n_mor, "unit")

        table = {}
        for (later, first), result in compose.items():
            later, first, result = int(later), int(first), int(result)
            for idx in (later, first, result):
                if not 0 <= idx < n_mor:
                    raise ValueError(f"compose entry out of range: {(later, first, result)}")
            table[(later, first)] = result
        self.compose = MappingProxyType(table)

        fibers = [[] for _ in range(n_obj)]
        for m, y in enumerate(self.target):
            fibers[y].append(m)
        self._target_fibers = tuple(tuple(f) for f in fibers)
        self._plan = None
        self._endpoint_map = None

    @staticmethod
    def _index_tuple(values, expected_len, bound, name):
        out = tuple(int(v) for v in values)
        if len(out) != expected_len:
            raise ValueError(f"{name} table has length {len(out)}, expected {expected_len}")
        if any(not 0 <= v < bound for v in out):
            raise ValueError(f"{name} table contains an out-of-range index")
        return out

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    def composable(self, later: int, first: int) -> bool:
        return (later, first) in self.compose

    def composition(self, later: int, first: int) -> int:
        try:
            return self.compose[(later, first)]
        except KeyError:
            raise ValueError(
                f"{self.morphisms[later]} o {self.morphisms[first]} is not defined"
            ) from None

    def target_fiber(self, obj: int) -> tuple[int, ...]:
        """Morphisms whose target is ``obj``."""
        return self._target_fibers[obj]

    def morphism_between(self, src: int, tgt: int) -> tuple[int, ...]:
        """All morphisms ``src -> tgt`` (any number, in index order)."""
        if self._endpoint_map is None:
            m = {}
            for k in range(self.n_morphisms):
                m.setdefault((self.source[k], self.target[k]), []).append(k)
            self._endpoint_map = {key: tuple(v) for key, v in m.items()}
        return self._endpoint_map.get((src, tgt), ())

    def is_pair_like(self) -> bool:
        """True iff there is exactly one morphism between every ordered pair
        of objects (the structure of a pair groupoid)."""
        n = self.n_objects
        if self.n_morphisms != n * n:
            return False
        return all(
            len(self.morphism_between(x, y)) == 1 for x in range(n) for y in range(n)
        )

    def _conv_plan(self):
        """Index arrays enumerating all (alpha, gamma) with a common target,
        together with gamma^-1 o alpha.  Used to vectorize convolution."""
        if self._plan is None:
            alphas, gammas, rests = [], [], []
            for alpha in range(self.n_morphisms):
                for gamma in self.target_fiber(self.target[alpha]):
                    rest = self.compose.get((self.inverse[gamma], alpha))
                    if rest is None:
                        raise ValueError(
                            "composition table is incomplete; validate the groupoid first"
                        )
                    alphas.append(alpha)
                    gammas.append(gamma)
                    rests.append(rest)
            self._plan = (
                np.asarray(alphas, dtype=np.intp),
                np.asarray(gammas, dtype=np.intp),
                np.asarray(rests, dtype=np.intp),
            )
        return self._plan

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.source == other.source
            and self.target == other.target
            and self.inverse == other.inverse
            and self.unit == other.unit
            and dict(self.compose) == dict(other.compose)
        )

    def __repr__(self):
        return f"FiniteGroupoid(objects={self.n_objects}, morphisms={self.n_morphisms})"


@dataclass(frozen=True)
class Measure:
    """Weights for integration over morphisms.  ``modular`` is the density
    relating a weight to its pushforward under inversion; for the counting
    measure both are identically one."""

    groupoid: FiniteGroupoid
    weight: np.ndarray
    modular: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weight, dtype=float)
        d = np.asarray(self.modular, dtype=float)
        k = self.groupoid.n_morphisms
        if w.shape != (k,) or d.shape != (k,):
            raise ValueError("measure arrays must have one entry per morphism")
        if np.any(w <= 0) or np.any(d <= 0):
            raise ValueError("weights and modular values must be positive")
        w.flags.writeable = False
        d.flags.writeable = False
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "modular", d)

    @property
    def is_counting(self) -> bool:
        return bool(np.all(self.weight == 1.0) and np.all(self.modular == 1.0))


def counting_measure(groupoid: FiniteGroupoid) -> Measure:
    k = groupoid.n_morphisms
    return Measure(groupoid, np.ones(k), np.ones(k))


@dataclass(frozen=True)
class GroupoidFunction:
    """A complex-valued function on the morphisms of a finite groupoid."""

    groupoid: FiniteGroupoid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.groupoid.n_morphisms,):
            raise ValueError(
                f"expected {self.groupoid.n_morphisms} values, got shape {v.shape}"
            )
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __add__(self, other):
        self._check_other(other)
        return GroupoidFunction(self.groupoid, self.values + other.values)

    def __sub__(self, other):
        self._check_other(other)
        return GroupoidFunction(self.groupoid, self.values - other.values)

    def __mul__(self, scalar):
        return GroupoidFunction(self.groupoid, self.values * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return GroupoidFunction(self.groupoid, -self.values)

    def _check_other(self, other):
        if not isinstance(other, GroupoidFunction) or other.groupoid != self.groupoid:
            raise ValueError("functions live on different groupoids")


def unit_indicator(groupoid: FiniteGroupoid) -> GroupoidFunction:
    """The indicator function of the unit morphisms (the convolution unit
    under the counting measure)."""
    v = np.zeros(groupoid.n_morphisms, dtype=complex)
    for u in groupoid.unit:
        v[u] = 1.0
    return GroupoidFunction(groupoid, v)


# ---------------------------------------------------------------------------
# builders


def build_pair_groupoid(n: int) -> FiniteGroupoid:
    """Groupoid of ordered pairs over ``n`` objects.

    The morphism ``(y, x)`` is the transition ``x -> y``; composition is
    ``(z, y) o (y, x) = (z, x)``, units are the diagonal pairs, and the
    inverse of ``(y, x)`` is ``(x, y)``.
    """
    if n < 1:
        raise ValueError("a pair groupoid needs at least one object")
    objects = [str(x) for x in range(n)]
    morphisms = [f"{y}<-{x}" for y in range(n) for x in range(n)]

    def idx(y, x):
        return y * n + x

    source = [x for _ in range(n) for x in range(n)]
    target = [y for y in range(n) for _ in range(n)]
    inverse = [idx(x, y) for y in range(n) for x in range(n)]
    unit = [idx(x, x) for x in range(n)]
    compose = {
        (idx(z, y), idx(y, x)): idx(z, x)
        for z in range(n)
        for y in range(n)
        for x in range(n)
    }
    return FiniteGroupoid(objects, morphisms, source, target, compose, inverse, unit)


def cyclic_cayley_table(n: int) -> list[list[int]]:
    """Multiplication table of the cyclic group of order ``n``."""
    if n < 1:
        raise ValueError("group order must be positive")
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def build_group_groupoid(
    cayley_table: Sequence[Sequence[int]],
    labels: Sequence[str] | None = None,
) -> FiniteGroupoid:
    """One-object groupoid whose morphisms are the elements of a finite group.

    ``cayley_table[i][j]`` must be the product of element ``i`` with element
    ``j`` (``j`` acting first, consistent with the groupoid composition
    ``i o j``).  The table is checked to be a group: an identity exists,
    multiplication is associative, and every element has a two-sided
    inverse.
    """
    table = [list(map(int, row)) for row in cayley_table]
    m = len(table)
    if m == 0:
        raise ValueError("empty multiplication table")
    for row in table:
        if len(row) != m or any(not 0 <= v < m for v in row):
            raise ValueError("multiplication table must be square with in-range entries")

    identity = None
    for e in range(m):
        if all(table[e][j] == j for j in range(m)) and all(
            table[j][e] == j for j in range(m)
        ):
            identity = e
            break
    if identity is None:
        raise ValueError("not a group: no two-sided identity element")

    for a in range(m):
        for b in range(m):
            for c in range(m):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise ValueError(
                        f"not a group: multiplication is not associative at ({a},{b},{c})"
                    )

    inverse = [None] * m
    for a in range(m):
        for b in range(m):
            if table[a][b] == identity and table[b][a] == identity:
                inverse[a] = b
                break
        if inverse[a] is None:
            raise ValueError(f"not a group: element {a} has no two-sided inverse")

    if labels is None:
        labels = [f"g{k}" for k in range(m)]
    compose = {(i, j): table[i][j] for i in range(m) for j in range(m)}
    return FiniteGroupoid(
        objects=["0"],
        morphisms=labels,
        source=[0] * m,
        target=[0] * m,
        compose=compose,
        inverse=inverse,
        unit=[identity],
    )


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class GroupoidViolation:
    kind: str
    members: tuple[str, ...]
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.message}"


@dataclass
class GroupoidValidationReport:
    violations: list[GroupoidViolation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_kind(self, kind: str) -> list[GroupoidViolation]:
        return [v for v in self.violations if v.kind == kind]

    def summary(self) -> str:
        if self.ok:
            return "groupoid axioms hold"
        lines = [f"{len(self.violations)} violation(s):"]
        lines += [f"  {v}" for v in self.violations[:50]]
        if len(self.violations) > 50:
            lines.append(f"  ... and {len(self.violations) - 50} more")
        return "\n".join(lines)


def validate_groupoid(groupoid: FiniteGroupoid) -> GroupoidValidationReport:
    """Exhaustively check every groupoid axiom and report each violation.

    An empty report means the tables define a groupoid: composition is
    defined exactly on endpoint-matching pairs and is associative, units
    are two-sided identities, and inverses compose to units on both sides.
    """
    g = groupoid
    lab = g.morphisms
    out: list[GroupoidViolation] = []

    def bad(kind, members, message):
        out.append(GroupoidViolation(kind, tuple(lab[m] for m in members), message))

    # composition domain and endpoint coherence
    for b in range(g.n_morphisms):
        for a in range(g.n_morphisms):
            defined = (b, a) in g.compose
            should = g.target[a] == g.source[b]
            if defined and not should:
                bad("composability", (b, a),
                    f"{lab[b]} o {lab[a]} defined although endpoints do not match")
            elif should and not defined:
                bad("composability", (b, a),
                    f"{lab[b]} o {lab[a]} missing although endpoints match")
            if defined:
                c = g.compose[(b, a)]
                if g.source[c] != g.source[a] or g.target[c] != g.target[b]:
                    bad("endpoint", (b, a, c),
                        f"{lab[b]} o {lab[a]} = {lab[c]} has wrong endpoints")

    # associativity on all composable triples
    for (b, a), ba in g.compose.items():
        for c in range(g.n_morphisms):
            if (c, b) not in g.compose:
                continue
            cb = g.compose[(c, b)]
            left = g.compose.get((c, ba))
            right = g.compose.get((cb, a))
            if left is None or right is None:
                continue  # domain failure already reported
            if left != right:
                bad("associativity", (c, b, a),
                    f"({lab[c]} o {lab[b]}) o {lab[a]} = {lab[right]} but "
                    f"{lab[c]} o ({lab[b]} o {lab[a]}) = {lab[left]}")

    # units
    for x, u in enumerate(g.unit):
        if g.source[u] != x or g.target[u] != x:
            bad("unit", (u,), f"unit of object {g.objects[x]} is not a loop at it")
    for a in range(g.n_morphisms):
        u_src = g.unit[g.source[a]]
        u_tgt = g.unit[g.target[a]]
        if g.compose.get((a, u_src)) != a:
            bad("unit", (a, u_src), f"{lab[a]} o {lab[u_src]} != {lab[a]}")
        if g.compose.get((u_tgt, a)) != a:
            bad("unit", (u_tgt, a), f"{lab[u_tgt]} o {lab[a]} != {lab[a]}")

    # inverses
    for a in range(g.n_morphisms):
        ia = g.inverse[a]
        if g.source[ia] != g.target[a] or g.target[ia] != g.source[a]:
            bad("inverse", (a, ia), f"inverse of {lab[a]} has wrong endpoints")
            continue
        if g.compose.get((ia, a)) != g.unit[g.source[a]]:
            bad("inverse", (ia, a), f"{lab[ia]} o {lab[a]} is not the unit at the source")
        if g.compose.get((a, ia)) != g.unit[g.target[a]]:
            bad("inverse", (a, ia), f"{lab[a]} o {lab[ia]} is not the unit at the target")

    return GroupoidValidationReport(out)
