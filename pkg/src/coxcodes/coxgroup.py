"""Finite Coxeter systems: construction, classification, and enumeration.

A system is specified by a defining matrix M (M[i][i] = 1, M[i][j] = M[j][i]
is the order of s_i s_j).  Connected components of the diagram (edges where
M[i][j] >= 3) are matched against the finite classification; anything else is
rejected.  Groups are enumerated by breadth-first search over an exact
faithful realization per component:

  * A_k   - permutations of k+1 points,
  * B_k   - signed permutations,
  * D_k   - even-signed permutations,
  * I2(n) - dihedral normal form (rotation exponent, flip bit),
  * F4, E6, E7, E8 - integer matrices of the crystallographic reflection
    representation,
  * H3, H4 - matrices over Z[phi] with phi^2 = phi + 1,

and direct products as tuples of the above.  No floating point anywhere, so
element equality is exact.  BFS depth equals the Coxeter length, and element
indices follow BFS order with shortlex tie-breaking (elements within a length
level are ordered by the lexicographically smallest reduced word), which makes
every downstream coordinate ordering reproducible bit-exactly.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadParameterError,
    CapExceededError,
    MalformedMatrixError,
    NotFiniteError,
)

DEFAULT_CAP = 10**7

_EXCEPTIONAL_ORDERS = {
    "H3": 120,
    "H4": 14400,
    "F4": 1152,
    "E6": 51840,
    "E7": 2903040,
    "E8": 696729600,
}


def _component_order(kind: str, param: int) -> int:
    if kind == "A":
        return math.factorial(param + 1)
    if kind == "B":
        return (1 << param) * math.factorial(param)
    if kind == "D":
        return (1 << (param - 1)) * math.factorial(param)
    if kind == "I2":
        return 2 * param
    return _EXCEPTIONAL_ORDERS[kind]


@dataclass(frozen=True)
class Component:
    """One irreducible component of a system's diagram.

    ``vertices`` lists the original generator indices in the canonical order
    expected by the component's realization.
    """

    kind: str
    param: int
    vertices: tuple[int, ...]
    order: int

    @property
    def label(self) -> str:
        if self.kind == "I2":
            return f"I2({self.param})"
        if self.kind in ("A", "B", "D"):
            return f"{self.kind}{self.param}"
        return self.kind


@dataclass(frozen=True)
class CoxeterSystem:
    rank: int
    matrix: tuple[tuple[int, ...], ...]
    components: tuple[Component, ...]
    order: int
    name: str = ""

    @property
    def label(self) -> str:
        return self.name or "x".join(c.label for c in self.components)

    def descriptor(self) -> dict:
        return {"matrix": [list(row) for row in self.matrix]}


# ---------------------------------------------------------------------------
# Defining matrices and validation
# ---------------------------------------------------------------------------


def _validate_matrix(matrix) -> tuple[tuple[int, ...], ...]:
    m = len(matrix)
    if m == 0:
        raise MalformedMatrixError("empty defining matrix")
    rows = []
    for i, row in enumerate(matrix):
        if len(row) != m:
            raise MalformedMatrixError("defining matrix is not square")
        for j, v in enumerate(row):
            if int(v) != v:
                raise MalformedMatrixError("defining matrix entries must be integers")
            v = int(v)
            if i == j and v != 1:
                raise MalformedMatrixError(f"diagonal entry M[{i}][{i}] = {v}, expected 1")
            if i != j and v < 2:
                raise MalformedMatrixError(
                    f"off-diagonal entry M[{i}][{j}] = {v}, expected >= 2"
                )
            if v != int(matrix[j][i]):
                raise MalformedMatrixError("defining matrix is not symmetric")
        rows.append(tuple(int(v) for v in row))
    return tuple(rows)


def _family_matrix(family: str, m: int | None, n: int | None):
    family = family.upper()
    if family == "A":
        if m is None or m < 1:
            raise BadParameterError("family A requires m >= 1")
        return [
            [1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(m)]
            for i in range(m)
        ]
    if family == "B":
        if m is None or m < 2:
            raise BadParameterError("family B requires m >= 2")
        mat = [
            [1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(m)]
            for i in range(m)
        ]
        mat[0][1] = mat[1][0] = 4
        return mat
    if family == "D":
        if m is None or m < 2:
            raise BadParameterError("family D requires m >= 2 (m in {2,3} are aliases)")
        mat = [[1 if i == j else 2 for j in range(m)] for i in range(m)]
        if m >= 3:
            mat[0][2] = mat[2][0] = 3
            mat[1][2] = mat[2][1] = 3
            for i in range(2, m - 1):
                mat[i][i + 1] = mat[i + 1][i] = 3
        return mat
    if family == "I2":
        if n is None or n < 2:
            raise BadParameterError("family I2 requires n >= 2")
        return [[1, n], [n, 1]]
    if family in ("H3", "H4"):
        k = 3 if family == "H3" else 4
        mat = [[1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(k)] for i in range(k)]
        mat[0][1] = mat[1][0] = 5
        return mat
    if family == "F4":
        mat = [[1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(4)] for i in range(4)]
        mat[1][2] = mat[2][1] = 4
        return mat
    if family in ("E6", "E7", "E8"):
        k = int(family[1])
        mat = [[1 if i == j else 2 for j in range(k)] for i in range(k)]
        for i in range(k - 2):
            mat[i][i + 1] = mat[i + 1][i] = 3
        mat[2][k - 1] = mat[k - 1][2] = 3
        return mat
    raise BadParameterError(f"unknown family {family!r}")


def build_system(
    *,
    family: str | None = None,
    m: int | None = None,
    n: int | None = None,
    mu: int | None = None,
    matrix=None,
    product=None,
    name: str = "",
) -> CoxeterSystem:
    """Construct and classify a finite Coxeter system.

    Exactly one of ``family``, ``matrix``, ``product`` must be given.
    ``mu`` repeats a family block as a ``mu``-fold direct product.  Direct
    products concatenate defining matrices with all cross entries 2.
    """
    given = [x is not None for x in (family, matrix, product)]
    if sum(given) != 1:
        raise BadParameterError("specify exactly one of family, matrix, product")
    if product is not None:
        blocks = [build_system(**_descriptor_kwargs(d)) for d in product]
        mats = [b.matrix for b in blocks]
        matrix = _direct_sum(mats)
    elif family is not None:
        block = _family_matrix(family, m, n)
        if mu is not None:
            if mu < 1:
                raise BadParameterError("mu must be >= 1")
            matrix = _direct_sum([block] * mu)
        else:
            matrix = block
    matrix = _validate_matrix(matrix)
    components = classify_components(matrix)
    order = 1
    for c in components:
        order *= c.order
    return CoxeterSystem(
        rank=len(matrix),
        matrix=matrix,
        components=tuple(components),
        order=order,
        name=name,
    )


def _descriptor_kwargs(d) -> dict:
    if isinstance(d, CoxeterSystem):
        return {"matrix": [list(r) for r in d.matrix]}
    if not isinstance(d, dict):
        raise BadParameterError(f"bad system descriptor: {d!r}")
    allowed = {"family", "m", "n", "mu", "matrix", "product"}
    bad = set(d) - allowed
    if bad:
        raise BadParameterError(f"unknown descriptor keys: {sorted(bad)}")
    return dict(d)


def system_from_descriptor(d) -> CoxeterSystem:
    """Build a system from a JSON-style descriptor dict (or JSON text)."""
    if isinstance(d, str):
        d = json.loads(d)
    return build_system(**_descriptor_kwargs(d))


def _direct_sum(mats):
    sizes = [len(mat) for mat in mats]
    total = sum(sizes)
    out = [[2] * total for _ in range(total)]
    off = 0
    for mat in mats:
        k = len(mat)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = mat[i][j]
        off += k
    return out


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def classify_components(matrix) -> list[Component]:
    matrix = _validate_matrix(matrix)
    m = len(matrix)
    seen = [False] * m
    comps = []
    for start in range(m):
        if seen[start]:
            continue
        stack, verts = [start], []
        seen[start] = True
        while stack:
            u = stack.pop()
            verts.append(u)
            for v in range(m):
                if v != u and not seen[v] and matrix[u][v] >= 3:
                    seen[v] = True
                    stack.append(v)
        comps.append(_classify_one(matrix, sorted(verts)))
    return comps


def _classify_one(matrix, verts) -> Component:
    k = len(verts)
    if k == 1:
        return Component("A", 1, tuple(verts), 2)
    if k == 2:
        n = matrix[verts[0]][verts[1]]
        return Component("I2", n, tuple(verts), 2 * n)

    adj = {v: [u for u in verts if u != v and matrix[v][u] >= 3] for v in verts}
    nedges = sum(len(a) for a in adj.values()) // 2
    if nedges != k - 1:
        raise NotFiniteError("diagram component contains a cycle")
    degs = {v: len(adj[v]) for v in verts}
    if max(degs.values()) > 3:
        raise NotFiniteError("diagram vertex of degree > 3")
    branches = [v for v in verts if degs[v] == 3]
    if len(branches) > 1:
        raise NotFiniteError("diagram with more than one branch vertex")
    labels = sorted(
        matrix[u][v] for i, u in enumerate(verts) for v in verts[i + 1 :] if matrix[u][v] >= 3
    )

    if not branches:
        ends = sorted(v for v in verts if degs[v] == 1)
        path = [ends[0]]
        prev = None
        while len(path) < k:
            nxt = [u for u in adj[path[-1]] if u != prev]
            prev = path[-1]
            path.append(nxt[0])
        edge_labels = [matrix[path[i]][path[i + 1]] for i in range(k - 1)]
        big = [(i, lab) for i, lab in enumerate(edge_labels) if lab > 3]
        if not big:
            return Component("A", k, tuple(path), _component_order("A", k))
        if len(big) > 1:
            raise NotFiniteError("diagram with two or more marked edges")
        pos, lab = big[0]
        if lab == 4:
            if pos == k - 2:
                path, pos = path[::-1], 0
            if pos == 0:
                return Component("B", k, tuple(path), _component_order("B", k))
            if k == 4 and pos == 1:
                return Component("F4", 4, tuple(sorted(path)), _EXCEPTIONAL_ORDERS["F4"])
            raise NotFiniteError("interior 4-edge outside F4")
        if lab == 5:
            if pos == k - 2:
                path, pos = path[::-1], 0
            if pos == 0 and k in (3, 4):
                kind = "H3" if k == 3 else "H4"
                return Component(kind, k, tuple(sorted(path)), _EXCEPTIONAL_ORDERS[kind])
            raise NotFiniteError("5-edge pattern matches no finite type")
        raise NotFiniteError(f"edge label {lab} infeasible at rank {k}")

    if any(lab != 3 for lab in labels):
        raise NotFiniteError("branched diagram with a marked edge")
    b = branches[0]
    arms = []
    for first in adj[b]:
        arm, prev, cur = [first], b, first
        while degs[cur] == 2:
            nxt = [u for u in adj[cur] if u != prev][0]
            prev, cur = cur, nxt
            arm.append(cur)
        arms.append(arm)
    arms.sort(key=lambda a: (len(a), a[0]))
    lens = [len(a) for a in arms]
    if lens[0] == 1 and lens[1] == 1:
        # type D: two short arms, then the tail walking away from the branch
        order = [arms[0][0], arms[1][0], b] + arms[2]
        return Component("D", k, tuple(order), _component_order("D", k))
    if lens[:2] == [1, 2] and lens[2] in (2, 3, 4):
        kind = {2: "E6", 3: "E7", 4: "E8"}[lens[2]]
        return Component(kind, k, tuple(sorted(verts)), _EXCEPTIONAL_ORDERS[kind])
    raise NotFiniteError("branched diagram matches no finite type")


def restrict_matrix(matrix, J):
    J = sorted(J)
    return tuple(tuple(matrix[i][j] for j in J) for i in J)


def subgroup_order(system: CoxeterSystem, J) -> int:
    """Order of the standard subgroup <J>, from the classification (no enumeration)."""
    J = sorted(set(J))
    if not J:
        return 1
    for j in J:
        if not 0 <= j < system.rank:
            raise BadParameterError(f"generator index {j} out of range")
    comps = classify_components(restrict_matrix(system.matrix, J))
    order = 1
    for c in comps:
        order *= c.order
    return order


# ---------------------------------------------------------------------------
# Realizations
# ---------------------------------------------------------------------------


class _PermRealization:
    """A_k acting on tuples: generator j swaps positions j, j+1."""

    def __init__(self, k):
        self.identity = tuple(range(k + 1))

    def mult(self, w, j):
        lst = list(w)
        lst[j], lst[j + 1] = lst[j + 1], lst[j]
        return tuple(lst)


class _SignedPermRealization:
    """B_k on signed tuples: generator 0 flips the first entry's sign."""

    def __init__(self, k):
        self.identity = tuple(range(1, k + 1))

    def mult(self, w, j):
        lst = list(w)
        if j == 0:
            lst[0] = -lst[0]
        else:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
        return tuple(lst)


class _EvenSignedPermRealization:
    """D_k: generator 0 swaps the first two entries and flips both signs."""

    def __init__(self, k):
        self.identity = tuple(range(1, k + 1))

    def mult(self, w, j):
        lst = list(w)
        if j == 0:
            lst[0], lst[1] = -lst[1], -lst[0]
        else:
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
        return tuple(lst)


class _DihedralRealization:
    """I2(n) in normal form (rotation exponent, flip bit)."""

    def __init__(self, n):
        self.n = n
        self.identity = (0, 0)

    def mult(self, w, j):
        r, f = w
        if j == 1:
            r = (r + (1 if f == 0 else -1)) % self.n
        return (r, f ^ 1)


class _IntMatrixRealization:
    """Crystallographic reflection representation with integer entries.

    Elements are matrices stored as tuples of columns; right multiplication
    by generator j is the column operation col_i -= c[j][i] * col_j (i != j),
    col_j -> -col_j.
    """

    def __init__(self, local_matrix):
        k = len(local_matrix)
        self.c = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(i + 1, k):
                lab = local_matrix[i][j]
                if lab == 2:
                    continue
                if lab == 3:
                    self.c[i][j] = self.c[j][i] = 1
                elif lab == 4:
                    self.c[i][j], self.c[j][i] = 1, 2
                elif lab == 6:
                    self.c[i][j], self.c[j][i] = 1, 3
                else:
                    raise NotFiniteError(f"non-crystallographic label {lab}")
        self.identity = tuple(
            tuple(1 if i == j else 0 for i in range(k)) for j in range(k)
        )

    def mult(self, w, j):
        cj = w[j]
        cols = []
        for i, ci in enumerate(w):
            if i == j:
                cols.append(tuple(-x for x in cj))
            else:
                a = self.c[j][i]
                if a:
                    cols.append(tuple(x - a * y for x, y in zip(ci, cj)))
                else:
                    cols.append(ci)
        return tuple(cols)


class _GoldenMatrixRealization:
    """H3/H4 reflection representation over Z[phi], phi^2 = phi + 1.

    Ring elements are pairs (a, b) = a + b*phi; the reflection coefficient is
    1 for a 3-edge and phi for a 5-edge.
    """

    def __init__(self, local_matrix):
        k = len(local_matrix)
        self.c = [[(0, 0)] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                lab = local_matrix[i][j]
                if lab == 3:
                    self.c[i][j] = (1, 0)
                elif lab == 5:
                    self.c[i][j] = (0, 1)
                elif lab != 2:
                    raise NotFiniteError(f"label {lab} outside Z[phi] support")
        self.identity = tuple(
            tuple((1, 0) if i == j else (0, 0) for i in range(k)) for j in range(k)
        )

    def mult(self, w, j):
        cj = w[j]
        cols = []
        for i, ci in enumerate(w):
            if i == j:
                cols.append(tuple((-x, -y) for x, y in cj))
                continue
            ca, cb = self.c[j][i]
            if ca == 0 and cb == 0:
                cols.append(ci)
            elif cb == 0:  # coefficient 1
                cols.append(tuple((x - u, y - v) for (x, y), (u, v) in zip(ci, cj)))
            else:  # coefficient phi: phi*(u + v*phi) = v + (u+v)*phi
                cols.append(
                    tuple((x - v, y - u - v) for (x, y), (u, v) in zip(ci, cj))
                )
        return tuple(cols)


class _ProductRealization:
    def __init__(self, factors, genmap):
        self.factors = factors
        self.genmap = genmap  # original generator index -> (factor index, local gen)
        self.identity = tuple(f.identity for f in factors)

    def mult(self, w, g):
        fi, local = self.genmap[g]
        lst = list(w)
        lst[fi] = self.factors[fi].mult(lst[fi], local)
        return tuple(lst)


def _component_realization(system: CoxeterSystem, comp: Component):
    if comp.kind == "A":
        return _PermRealization(comp.param)
    if comp.kind == "B":
        return _SignedPermRealization(comp.param)
    if comp.kind == "D":
        return _EvenSignedPermRealization(comp.param)
    if comp.kind == "I2":
        return _DihedralRealization(comp.param)
    local = restrict_matrix(system.matrix, comp.vertices)
    if comp.kind in ("H3", "H4"):
        return _GoldenMatrixRealization(local)
    return _IntMatrixRealization(local)


def _build_realization(system: CoxeterSystem):
    factors = []
    genmap = {}
    for fi, comp in enumerate(system.components):
        factors.append(_component_realization(system, comp))
        if comp.kind in ("H3", "H4", "F4", "E6", "E7", "E8"):
            # matrix realizations index generators by sorted original position
            ordered = sorted(comp.vertices)
        else:
            ordered = comp.vertices
        for local, orig in enumerate(ordered):
            genmap[orig] = (fi, local)
    if len(factors) == 1:
        real = factors[0]

        class _Single:
            identity = real.identity

            @staticmethod
            def mult(w, g):
                return real.mult(w, genmap[g][1])

        return _Single
    return _ProductRealization(factors, genmap)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


@dataclass
class GroupTable:
    """Fully enumerated group with lengths, descent sets, and reduced words."""

    system: CoxeterSystem
    size: int
    action: np.ndarray  # (n, m) right multiplication by generators
    length: np.ndarray
    descent: np.ndarray  # bitmask over generators
    words: list[tuple[int, ...]]
    parent: np.ndarray
    lastgen: np.ndarray
    identity_index: int = 0
    _left_cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.system.rank

    def descent_number(self, w: int) -> int:
        return int(self.descent[w]).bit_count()

    def descent_set(self, w: int) -> frozenset[int]:
        d = int(self.descent[w])
        return frozenset(i for i in range(self.rank) if (d >> i) & 1)

    def left_action(self, w: int) -> np.ndarray:
        """Permutation u -> index of w*u, computed through reduced words."""
        cached = self._left_cache.get(w)
        if cached is not None:
            return cached
        perm = np.empty(self.size, dtype=np.int64)
        perm[0] = w
        for u in range(1, self.size):
            perm[u] = self.action[perm[self.parent[u]], self.lastgen[u]]
        self._left_cache[w] = perm
        return perm

    def word_label(self, w: int) -> str:
        word = self.words[w]
        return "e" if not word else ".".join(str(g + 1) for g in word)


def enumeration_cap() -> int:
    return int(os.environ.get("COXKIT_CAP", DEFAULT_CAP))


def enumerate_group(system: CoxeterSystem, cap: int | None = None) -> GroupTable:
    """BFS-enumerate the group; deterministic shortlex-BFS element order."""
    if cap is None:
        cap = enumeration_cap()
    if system.order > cap:
        raise CapExceededError(
            f"|W| = {system.order} exceeds the enumeration cap {cap}"
        )
    real = _build_realization(system)
    m = system.rank
    index = {real.identity: 0}
    elements = [real.identity]
    words: list[tuple[int, ...]] = [()]
    length = [0]
    parent = [0]
    lastgen = [0]
    action_rows = []
    i = 0
    while i < len(elements):
        row = [0] * m
        wi = elements[i]
        for g in range(m):
            e2 = real.mult(wi, g)
            j = index.get(e2)
            if j is None:
                j = len(elements)
                index[e2] = j
                elements.append(e2)
                words.append(words[i] + (g,))
                length.append(length[i] + 1)
                parent.append(i)
                lastgen.append(g)
            row[g] = j
        action_rows.append(row)
        i += 1
    n = len(elements)
    if n != system.order:
        raise NotFiniteError(
            f"enumeration produced {n} elements, classification says {system.order}"
        )
    action = np.array(action_rows, dtype=np.int64)
    length_arr = np.array(length, dtype=np.int64)
    descent = np.zeros(n, dtype=np.int64)
    for w in range(n):
        mask = 0
        for g in range(m):
            if length_arr[action[w, g]] < length_arr[w]:
                mask |= 1 << g
        descent[w] = mask
    return GroupTable(
        system=system,
        size=n,
        action=action,
        length=length_arr,
        descent=descent,
        words=words,
        parent=np.array(parent, dtype=np.int64),
        lastgen=np.array(lastgen, dtype=np.int64),
    )


# ---------------------------------------------------------------------------
# Standard cosets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StandardCoset:
    representative: int
    gens: tuple[int, ...]
    members: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.gens)


def standard_coset(table: GroupTable, w: int, J) -> StandardCoset:
    """The standard coset w<J>, closed under right multiplication by J."""
    J = tuple(sorted(set(J)))
    for j in J:
        if not 0 <= j < table.rank:
            raise IndexError(f"generator index {j} out of range")
    if not 0 <= w < table.size:
        raise IndexError(f"element index {w} out of range")
    seen = {w}
    stack = [w]
    while stack:
        u = stack.pop()
        for g in J:
            v = int(table.action[u, g])
            if v not in seen:
                seen.add(v)
                stack.append(v)
    members = tuple(sorted(seen))
    return StandardCoset(representative=members[0], gens=J, members=members)


def all_cosets(table: GroupTable, J) -> list[StandardCoset]:
    """All standard cosets of <J>, in order of their minimal representative."""
    J = tuple(sorted(set(J)))
    assigned = np.zeros(table.size, dtype=bool)
    out = []
    for w in range(table.size):
        if assigned[w]:
            continue
        coset = standard_coset(table, w, J)
        for u in coset.members:
            assigned[u] = True
        out.append(coset)
    return out


# ---------------------------------------------------------------------------
# Cayley graph export
# ---------------------------------------------------------------------------

_DOT_PALETTE = [
    "red",
    "blue",
    "green",
    "orange",
    "purple",
    "brown",
    "cyan",
    "magenta",
    "gold",
    "gray",
]


def export_cayley_dot(table: GroupTable, system: CoxeterSystem) -> str:
    """Undirected DOT graph: one edge per pair {w, w*s_i}, colored by generator."""
    lines = ["graph cayley {", "  node [shape=circle];"]
    for w in range(table.size):
        lines.append(f'  v{w} [label="{table.word_label(w)}"];')
    for w in range(table.size):
        for g in range(table.rank):
            v = int(table.action[w, g])
            if w < v:
                color = _DOT_PALETTE[g % len(_DOT_PALETTE)]
                lines.append(f'  v{w} -- v{v} [color="{color}", gen={g}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
