"""Combinatorics of the simplex category: monotone maps, factorizations,
cellular maps, the interval monoid and the hom-sets of the lax walking
n-simplex."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

MAP_CLASSES = ("all", "active", "inert", "cellular", "surjective", "injective")


@dataclass(frozen=True)
class SimplexMap:
    """Monotone map [n] -> [m] stored by its values."""

    n: int
    m: int
    values: tuple

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if self.n < 0 or self.m < 0 or len(vals) != self.n + 1:
            raise ValueError(f"need {self.n + 1} values in [0, {self.m}], got {vals}")
        if any(v < 0 or v > self.m for v in vals):
            raise ValueError(f"value out of range in {vals}")
        if any(vals[k] > vals[k + 1] for k in range(self.n)):
            raise ValueError(f"not monotone: {vals}")

    def __call__(self, k):
        return self.values[k]

    def then(self, g):
        """g after self."""
        return compose(g, self)


def identity(n):
    return SimplexMap(n, n, tuple(range(n + 1)))


def compose(g, f):
    if f.m != g.n:
        raise ValueError("maps are not composable")
    return SimplexMap(f.n, g.m, tuple(g.values[v] for v in f.values))


def is_active(f):
    return f.values[0] == 0 and f.values[-1] == f.m


def is_inert(f):
    return all(f.values[k + 1] == f.values[k] + 1 for k in range(f.n))


def is_cellular(f):
    return all(f.values[k + 1] <= f.values[k] + 1 for k in range(f.n))


def is_surjective(f):
    return set(f.values) == set(range(f.m + 1))


def is_injective(f):
    return len(set(f.values)) == len(f.values)


_PREDICATES = {
    "all": lambda f: True,
    "active": is_active,
    "inert": is_inert,
    "cellular": is_cellular,
    "surjective": is_surjective,
    "injective": is_injective,
}


def enumerate_maps(n, m, kind="all"):
    """All maps [n] -> [m] of the given class, in lexicographic order."""
    if kind not in _PREDICATES:
        raise ValueError(f"unknown class {kind!r}; choose from {MAP_CLASSES}")
    pred = _PREDICATES[kind]
    out = []
    for vals in itertools.combinations_with_replacement(range(m + 1), n + 1):
        f = _trusted(n, m, vals)
        if pred(f):
            out.append(f)
    return out


def _trusted(n, m, vals):
    # combinations_with_replacement already yields sorted in-range tuples
    f = object.__new__(SimplexMap)
    object.__setattr__(f, "n", n)
    object.__setattr__(f, "m", m)
    object.__setattr__(f, "values", vals)
    return f


def factor_active_inert(f):
    """Unique (a, i) with a active, i inert and f = i.a"""
    lo, hi = f.values[0], f.values[-1]
    a = SimplexMap(f.n, hi - lo, tuple(v - lo for v in f.values))
    i = SimplexMap(hi - lo, f.m, tuple(range(lo, hi + 1)))
    return a, i


def factor_surj_inj(f):
    """Unique (s, j) with s surjective, j injective and f = j.s"""
    image = sorted(set(f.values))
    pos = {v: k for k, v in enumerate(image)}
    s = SimplexMap(f.n, len(image) - 1, tuple(pos[v] for v in f.values))
    j = SimplexMap(len(image) - 1, f.m, tuple(image))
    return s, j


def interval_join(n, m):
    """Ordinal sum of [n] and [m]; -1 is the empty interval."""
    if n < -1 or m < -1:
        raise ValueError("intervals have size at least -1")
    return n + m + 1


def active_injective(k, d):
    """Active injective maps [k] -> [d]."""
    if d == 0:
        return [SimplexMap(0, 0, (0,))] if k == 0 else []
    if k < 1 or k > d:
        return []
    return [SimplexMap(k, d, (0,) + mid + (d,))
            for mid in itertools.combinations(range(1, d), k - 1)]


def glue(a, b):
    """Place b after a, sharing the endpoint a(top) = b(0)."""
    return SimplexMap(a.n + b.n, a.m + b.m,
                      a.values + tuple(a.m + v for v in b.values[1:]))


@dataclass(frozen=True)
class BimodHom:
    """Object of the hom-category from i to j of the lax walking n-simplex.

    shape: active injective [k] -> [j - i]
    entries: k + 1 interval sizes (each >= -1), one per point of [k]
    """

    i: int
    j: int
    shape: SimplexMap
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if self.shape.m != self.j - self.i:
            raise ValueError("shape codomain must be [j - i]")
        if not (is_active(self.shape) and is_injective(self.shape)):
            raise ValueError("shape must be active and injective")
        if len(self.entries) != self.shape.n + 1 or any(e < -1 for e in self.entries):
            raise ValueError("need one interval of size >= -1 per point of the shape")


def compose_bimod(y, x):
    """y after x: glue shapes, join the two entries meeting at the seam."""
    if x.j != y.i:
        raise ValueError("not composable")
    seam = interval_join(x.entries[-1], y.entries[0])
    return BimodHom(x.i, y.j, glue(x.shape, y.shape),
                    x.entries[:-1] + (seam,) + y.entries[1:])


def identity_bimod(i):
    return BimodHom(i, i, SimplexMap(0, 0, (0,)), (-1,))


def bimod_hom(n, i, j, size_bound):
    """Objects of hom(i, j) whose entries all have size <= size_bound."""
    if not (0 <= i <= n and 0 <= j <= n):
        raise ValueError("endpoints must lie in [n]")
    if i > j:
        return []
    out = []
    for k in range(j - i + 1):
        for a in active_injective(k, j - i):
            for entries in itertools.product(range(-1, size_bound + 1), repeat=k + 1):
                out.append(BimodHom(i, j, a, entries))
    return out


def unital_bimod_hom(n, i, j):
    """Active injective maps into [j - i]; composition is glue."""
    if not (0 <= i <= n and 0 <= j <= n):
        raise ValueError("endpoints must lie in [n]")
    if i > j:
        return []
    return [a for k in range(j - i + 1) for a in active_injective(k, j - i)]
