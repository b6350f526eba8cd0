"""Generalized root systems of the Magic Star algebras.

Roots live in an N-dimensional Euclidean space, N = 4(n+1), with orthonormal
basis k_1..k_N.  They are stored in *doubled* integer coordinates so that the
spinorial roots 1/2(+-k_1 +- ... +-k_N) need no fractions: the true coordinate
of k_i is ``coords2[i] / 2``.

The roots are generated row by row from the Magic Star tables (center, six
tips, six outer points), each row sorted lexicographically on ``coords2``.
"""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import exact


class LatticeError(ValueError):
    pass


class InvalidLevelError(LatticeError):
    pass


class UnsupportedFamilyError(LatticeError):
    pass


class DimensionError(LatticeError):
    pass


class SpanError(LatticeError):
    """Vector is not in the rational span of the simple roots."""


class NotInLatticeError(LatticeError):
    """Vector is in the span of the simple roots but not an integral combination."""


class ConstructionError(RuntimeError):
    """A generated object failed a structural self-check (indicates a bug)."""


class Family(str, enum.Enum):
    E6 = "E6"
    E7 = "E7"
    E8 = "E8"

    @classmethod
    def parse(cls, value: Union[str, "Family"]) -> "Family":
        if isinstance(value, Family):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise UnsupportedFamilyError(f"unknown family {value!r}; expected e6, e7 or e8") from None


class Kind(str, enum.Enum):
    ORTHOGONAL = "O"
    SPINOR = "S"


@dataclass(frozen=True)
class AlgebraSpec:
    family: Family
    n: int

    @property
    def N(self) -> int:
        return 4 * (self.n + 1)

    @property
    def R(self) -> int:
        return self.N - {Family.E6: 2, Family.E7: 1, Family.E8: 0}[self.family]

    @property
    def name(self) -> str:
        return f"{self.family.value.lower()}^({self.n})"


def make_spec(family, n: int) -> AlgebraSpec:
    family = Family.parse(family)
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidLevelError(f"level n must be a positive integer, got {n!r}")
    return AlgebraSpec(family, int(n))


@dataclass(frozen=True)
class Root:
    coords2: tuple[int, ...]
    kind: Kind
    index: int

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, 2) for c in self.coords2)

    def __str__(self) -> str:
        return format_vector(self.coords2)


@dataclass(frozen=True)
class SimpleCoords:
    """Integer coefficients m_1..m_R of a lattice vector in the simple roots."""

    m: tuple[int, ...]

    def __iter__(self):
        return iter(self.m)

    def __len__(self):
        return len(self.m)

    def __getitem__(self, i):
        return self.m[i]


@dataclass(frozen=True)
class TableRow:
    """One line of a Magic Star table: a charge cell and a root kind."""

    label: str
    charges: tuple[tuple[int, int], ...]
    kind: Kind
    start: int
    stop: int

    def __len__(self) -> int:
        return self.stop - self.start


def format_vector(coords2: Sequence[int]) -> str:
    """Human readable form, e.g. ``k1-k2`` or ``1/2(+k1-k2-...)``."""
    coords2 = list(coords2)
    if all(abs(c) == 1 for c in coords2):
        return "1/2(" + "".join(("+" if c > 0 else "-") + f"k{i + 1}" for i, c in enumerate(coords2)) + ")"
    parts = []
    for i, c in enumerate(coords2):
        if c == 0:
            continue
        coef = Fraction(c, 2)
        sign = "+" if coef > 0 else "-"
        mag = "" if abs(coef) == 1 else f"{abs(coef)}*"
        parts.append(f"{sign}{mag}k{i + 1}")
    s = "".join(parts) or "0"
    return s[1:] if s.startswith("+") else s


# -- table generation -------------------------------------------------------

# (charge, lone orthogonal root, signed single coordinate, spinor prefix on k1,k2,k3)
_TIPS = (
    ((0, 2), {1: 1, 2: 1}, (3, -1), (1, 1, -1)),
    ((0, -2), {1: -1, 2: -1}, (3, 1), (-1, -1, 1)),
    ((1, 1), {2: -1, 3: -1}, (1, 1), (1, -1, -1)),
    ((-1, -1), {2: 1, 3: 1}, (1, -1), (-1, 1, 1)),
    ((-1, 1), {1: -1, 3: -1}, (2, 1), (-1, 1, -1)),
    ((1, -1), {1: 1, 3: 1}, (2, -1), (1, -1, 1)),
)
_POINTS = (
    ("+-(k1-k2)", {1: 1, 2: -1}, ((2, 0), (-2, 0))),
    ("+-(k2-k3)", {2: 1, 3: -1}, ((-1, 3), (1, -3))),
    ("+-(k3-k1)", {3: 1, 1: -1}, ((-1, -3), (1, 3))),
)

TIP_CHARGES = tuple(t[0] for t in _TIPS)
POINT_CHARGES = tuple(c for p in _POINTS for c in p[2])


def _vec2(N: int, entries: dict[int, int]) -> tuple[int, ...]:
    v = [0] * N
    for i, c in entries.items():
        v[i - 1] = c
    return tuple(v)


def _layout(family: Family, N: int):
    """Free orthogonal indices and spinor sign slots (coordinate groups)."""
    if family is Family.E8:
        free = list(range(4, N + 1))
        slots = [[i] for i in free]
    elif family is Family.E6:
        free = list(range(4, N - 2))
        slots = [[i] for i in free] + [[N - 2, N - 1, N]]
    else:
        raise UnsupportedFamilyError(
            "e7^(n) has no standalone root table; build it as the 3-graded subalgebra "
            "g_0 + C + T + T^- of e8^(n) via magic_star.three_grading(e8 roots, axis)"
        )
    return free, slots


def _spinors(N: int, prefix: Sequence[int], slots) -> list[tuple[int, ...]]:
    out = []
    for signs in itertools.product((1, -1), repeat=len(slots)):
        v = [0] * N
        v[0], v[1], v[2] = prefix
        for sign, slot in zip(signs, slots):
            for i in slot:
                v[i - 1] = sign
        if sum(1 for c in v if c > 0) % 2 == 0:
            out.append(tuple(v))
    return out


def _table_rows(family: Family, N: int):
    """Yield (label, charges, kind, vectors) in table order."""
    free, slots = _layout(family, N)
    for label, entries, charges in _POINTS:
        v = _vec2(N, {i: 2 * c for i, c in entries.items()})
        yield label, charges, Kind.ORTHOGONAL, [v, tuple(-c for c in v)]
    center = []
    for i, j in itertools.combinations(free, 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            center.append(_vec2(N, {i: si, j: sj}))
    yield "(0,0)", ((0, 0),), Kind.ORTHOGONAL, center
    yield "(0,0)", ((0, 0),), Kind.SPINOR, _spinors(N, (1, 1, 1), slots) + _spinors(N, (-1, -1, -1), slots)
    for charge, lone, (p, sp), prefix in _TIPS:
        orth = [_vec2(N, {i: 2 * c for i, c in lone.items()})]
        for i in free:
            for si in (2, -2):
                orth.append(_vec2(N, {p: 2 * sp, i: si}))
        label = f"({charge[0]},{charge[1]})"
        yield label, (charge,), Kind.ORTHOGONAL, orth
        yield label, (charge,), Kind.SPINOR, _spinors(N, prefix, slots)


def expected_row_counts(family: Family, N: int) -> list[int]:
    """Closed-form multiplicities of the table rows ("# of roots" column)."""
    if family is Family.E8:
        center_o, center_s, tip_o, tip_s = 2 * (N - 3) * (N - 4), 2 ** (N - 3), 2 * N - 5, 2 ** (N - 4)
    elif family is Family.E6:
        center_o, center_s, tip_o, tip_s = 2 * (N - 6) * (N - 7), 2 ** (N - 5), 2 * N - 11, 2 ** (N - 6)
    else:
        raise UnsupportedFamilyError("no table for e7^(n)")
    return [2, 2, 2, center_o, center_s] + [tip_o, tip_s] * 6


def expected_root_count(family, n: int) -> int:
    spec = make_spec(family, n)
    return sum(expected_row_counts(spec.family, spec.N))


def simple_root_vectors(spec: AlgebraSpec) -> list[tuple[int, ...]]:
    """Doubled coordinates of alpha_1 < ... < alpha_R."""
    N, R = spec.N, spec.R
    out = [_vec2(N, {i: 2, i + 1: -2}) for i in range(1, R - 1)]
    out.append(_vec2(N, {R - 2: 2, R - 1: 2}))
    out.append(tuple([-1] * N))
    return out


# -- packed keys for vectorized membership tests ---------------------------

_BASE = 9  # entries of sums of two doubled roots lie in [-4, 4]
_OFF = 4
_MAX_PACKED_N = 16  # 9**16 < 2**63


class RootSystem:
    """Immutable generalized root system with canonical indexing."""

    def __init__(self, spec: AlgebraSpec):
        if spec.family is Family.E7:
            _layout(spec.family, spec.N)  # raises with the explanatory message
        self.spec = spec
        N, R = spec.N, spec.R
        roots: list[Root] = []
        rows: list[TableRow] = []
        for label, charges, kind, vectors in _table_rows(spec.family, N):
            start = len(roots)
            for v in sorted(vectors):
                roots.append(Root(v, kind, len(roots)))
            rows.append(TableRow(label, charges, kind, start, len(roots)))
        self.roots = roots
        self.rows = rows
        self.coords2 = np.array([r.coords2 for r in roots], dtype=np.int64).reshape(len(roots), N)
        self.is_spinor = np.array([r.kind is Kind.SPINOR for r in roots], dtype=bool)
        self.lookup = {r.coords2: r.index for r in roots}
        if len(self.lookup) != len(roots):
            raise ConstructionError(f"{spec.name}: duplicate roots generated")
        for row, want in zip(rows, expected_row_counts(spec.family, N)):
            if len(row) != want:
                raise ConstructionError(f"{spec.name}: row {row.label}/{row.kind.value} has {len(row)} roots, expected {want}")
        self.neg = np.array([self.lookup.get(tuple(-c for c in r.coords2), -1) for r in roots], dtype=np.int64)
        if (self.neg < 0).any():
            raise ConstructionError(f"{spec.name}: root set is not closed under negation")

        self.simple = []
        for v in simple_root_vectors(spec):
            if v not in self.lookup:
                raise ConstructionError(f"{spec.name}: simple root {format_vector(v)} is not a root")
            self.simple.append(roots[self.lookup[v]])
        # A: N x R, columns are the simple roots in doubled coordinates.
        self.A = np.array([s.coords2 for s in self.simple], dtype=np.int64).T
        pnum, self._den = exact.left_inverse(self.A.tolist())
        self._pnum = np.array(pnum, dtype=object if max(abs(x) for r in pnum for x in r) > 2**40 else np.int64)
        # simple-root coordinates of every root
        self.L = self.decompose_many(self.coords2)

        self._packed = N <= _MAX_PACKED_N
        if self._packed:
            self._weights = _BASE ** np.arange(N, dtype=np.int64)
            self._key_shift = int(_OFF * self._weights.sum())
            keys = self.pack(self.coords2)
            self._order = np.argsort(keys, kind="stable")
            self._sorted_keys = keys[self._order]
            self.keys = keys
            self.zero_key = self._key_shift

    # -- basic protocol --

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i) -> Root:
        return self.roots[i]

    def __repr__(self) -> str:
        return f"RootSystem({self.spec.name}, {len(self)} roots)"

    @property
    def delta(self) -> list[Root]:
        return self.simple

    @property
    def orthogonal_indices(self) -> np.ndarray:
        return np.flatnonzero(~self.is_spinor)

    @property
    def spinor_indices(self) -> np.ndarray:
        return np.flatnonzero(self.is_spinor)

    def index(self, v) -> Optional[int]:
        return self.lookup.get(tuple(int(c) for c in _coords2_of(v)))

    def find(self, expr: dict[int, Fraction | int]) -> int:
        """Index of the root with true coordinates ``{i: c_i}`` (1-based i)."""
        v = _vec2(self.spec.N, {i: int(Fraction(c) * 2) for i, c in expr.items()})
        idx = self.lookup.get(v)
        if idx is None:
            raise KeyError(f"{format_vector(v)} is not a root of {self.spec.name}")
        return idx

    # -- vectorized lattice helpers --

    def pack(self, v2: np.ndarray) -> np.ndarray:
        return (np.asarray(v2, dtype=np.int64) @ self._weights) + self._key_shift

    def lookup_many(self, v2: np.ndarray) -> np.ndarray:
        """Root indices of the rows of ``v2`` (doubled coordinates), -1 if absent."""
        v2 = np.asarray(v2, dtype=np.int64)
        if not self._packed:
            return np.array([self.lookup.get(tuple(row), -1) for row in v2.tolist()], dtype=np.int64)
        ok = (np.abs(v2) <= _OFF).all(axis=1)
        return self._lookup_keys(self.pack(np.where(ok[:, None], v2, 0)), ok)

    def _lookup_keys(self, keys: np.ndarray, ok=None) -> np.ndarray:
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        hit = self._sorted_keys[pos] == keys
        if ok is not None:
            hit &= ok
        return np.where(hit, self._order[pos], -1)

    NOT_ROOT = -1
    ZERO = -2

    def sum_index(self, a, b) -> np.ndarray:
        """Index of alpha_a + alpha_b; ``NOT_ROOT`` if not a root, ``ZERO`` if b = -a."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._packed:
            keys = self.keys[a] + self.keys[b] - self._key_shift
            out = self._lookup_keys(keys.ravel()).reshape(keys.shape)
        else:
            v = self.coords2[a.ravel()] + self.coords2[b.ravel()]
            out = self.lookup_many(v).reshape(a.shape if a.ndim >= b.ndim else b.shape)
        return np.where(self.neg[a] == b, self.ZERO, out)

    def decompose_many(self, v2: np.ndarray) -> np.ndarray:
        """Simple-root coordinates of the rows of ``v2``; raises on span/lattice failure."""
        v2 = np.asarray(v2, dtype=np.int64)
        num = v2.astype(self._pnum.dtype) @ self._pnum.T
        if not (num @ self.A.T.astype(num.dtype) == v2 * self._den).all():
            raise SpanError("vector outside the span of the simple roots")
        if (num % self._den != 0).any():
            raise NotInLatticeError("vector is not an integral combination of the simple roots")
        return (num // self._den).astype(np.int64)

    def recompose(self, m) -> tuple[int, ...]:
        return tuple(int(x) for x in self.A @ np.asarray(list(m), dtype=np.int64))

    def inner_many(self, a, b) -> np.ndarray:
        """Integer inner products (alpha_a, alpha_b) of root index arrays."""
        s = (self.coords2[a] * self.coords2[b]).sum(axis=-1)
        if (s % 4).any():
            raise ConstructionError("non-integral inner product between roots")
        return s // 4

    def gram(self) -> np.ndarray:
        """Gram matrix (alpha_i, alpha_j) of the simple roots (integers)."""
        g = self.A.T @ self.A
        if (g % 4).any():
            raise ConstructionError("non-integral simple-root Gram matrix")
        return g // 4


def _coords2_of(v) -> tuple[int, ...]:
    if isinstance(v, Root):
        return v.coords2
    return tuple(int(c) for c in v)


_CACHE: dict[AlgebraSpec, RootSystem] = {}


def enumerate_roots(spec: AlgebraSpec) -> RootSystem:
    """Build (and memoize) the root system of ``spec``."""
    if spec.family is Family.E7:
        _layout(spec.family, spec.N)
    rs = _CACHE.get(spec)
    if rs is None:
        rs = _CACHE[spec] = RootSystem(spec)
    return rs


def simple_roots(spec_or_rs) -> list[Root]:
    rs = spec_or_rs if isinstance(spec_or_rs, RootSystem) else enumerate_roots(spec_or_rs)
    return list(rs.simple)


def inner(a, b) -> Fraction:
    a2, b2 = _coords2_of(a), _coords2_of(b)
    if len(a2) != len(b2):
        raise DimensionError(f"dimension mismatch: {len(a2)} vs {len(b2)}")
    return Fraction(sum(x * y for x, y in zip(a2, b2)), 4)


def decompose(v, rs: RootSystem) -> SimpleCoords:
    v2 = _coords2_of(v)
    if len(v2) != rs.spec.N:
        raise DimensionError(f"expected a vector of length {rs.spec.N}, got {len(v2)}")
    return SimpleCoords(tuple(int(x) for x in rs.decompose_many(np.array([v2]))[0]))


def roots_document(rs: RootSystem) -> dict:
    """Wire format of a root system; coordinates are doubled integers."""
    s = rs.spec
    return {
        "family": s.family.value.lower(),
        "n": s.n,
        "N": s.N,
        "R": s.R,
        "roots": [{"index": r.index, "kind": r.kind.value, "coords2": list(r.coords2)} for r in rs.roots],
    }


def write_roots_json(rs: RootSystem, path) -> int:
    with open(path, "w") as fh:
        json.dump(roots_document(rs), fh, separators=(",", ":"))
        fh.write("\n")
    return len(rs)


def root_index(v, rs: RootSystem) -> Optional[int]:
    return rs.index(v)


def closed_form_k(spec: AlgebraSpec) -> list[list[Fraction]]:
    """k_1..k_N in simple-root coordinates for e8^(n) via the closed forms
    k_{N-1} = 1/2(a_{N-1} - a_{N-2}), k_i = a_i + k_{i+1},
    k_N = -2 a_N - sum_{l<=N-2} l a_l - (N-1)/2 (a_{N-1} - a_{N-2}).
    """
    if spec.family is not Family.E8:
        raise UnsupportedFamilyError("closed forms are stated for e8^(n) (R = N)")
    N = spec.N
    zero = lambda: [Fraction(0)] * N  # noqa: E731
    k = [None] * (N + 1)
    k[N - 1] = zero()
    k[N - 1][N - 2] += Fraction(1, 2)   # a_{N-1} (0-based N-2)
    k[N - 1][N - 3] -= Fraction(1, 2)   # a_{N-2}
    for i in range(N - 2, 0, -1):
        k[i] = list(k[i + 1])
        k[i][i - 1] += 1
    kn = zero()
    kn[N - 1] = Fraction(-2)
    for ell in range(1, N - 1):
        kn[ell - 1] -= ell
    kn[N - 2] -= Fraction(N - 1, 2)
    kn[N - 3] += Fraction(N - 1, 2)
    k[N] = kn
    return k[1:]


def decompose_closed_form(v, spec: AlgebraSpec) -> tuple[Fraction, ...]:
    """Independent e8^(n) decomposition from the k_i closed forms."""
    v2 = _coords2_of(v)
    ks = closed_form_k(spec)
    out = [Fraction(0)] * spec.R
    for c2, kvec in zip(v2, ks):
        if c2:
            for j, q in enumerate(kvec):
                out[j] += Fraction(c2, 2) * q
    return tuple(out)

