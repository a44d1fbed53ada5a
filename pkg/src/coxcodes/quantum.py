"""Quantum CSS codes from nested Coxeter codes and transversal Z(k) analysis.

The order-(q, r) quantum code of a rank-m system is CSS(C(m-q-1), C(r)).
Its X stabilizers are supports of rank-(m-q) standard cosets, its Z
stabilizers supports of rank-(r+1) standard cosets, and its computational
basis states are indexed by cosets c + C(q) with c ranging over C(r).
Transversal Z(k) = diag(1, e^{i pi / 2^k}) applied on a standard coset
support either breaks the codespace, acts as a nontrivial logical, or acts
as the identity, decided by the rank of the coset; phases are tracked as
exact integers mod 2^(k+1) (multiples of pi / 2^k).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import codes, eulerian, gf2
from .coxgroup import CoxeterSystem, GroupTable, StandardCoset, all_cosets
from .errors import BadParameterError, ModeUnavailableError

BREAKS = "breaks_codespace"
NONTRIVIAL = "nontrivial_logical"
IDENTITY = "logical_identity"

FULL_MODE_C1PERP_MAX = 20
FULL_MODE_C2_MAX = 22
RANDOMIZED_SAMPLES = 10**4


@dataclass
class CssCode:
    system: CoxeterSystem
    table: GroupTable
    q: int
    r: int
    c1: codes.LinearCode  # C(m-q-1), the X-distance side
    c2: codes.LinearCode  # C(r), carrier of computational basis strings
    n: int
    k: int
    d: int | None  # None when q == r (not well defined)

    @property
    def m(self) -> int:
        return self.system.rank


@dataclass
class ZkVerdict:
    verdict: str  # breaks_codespace | nontrivial_logical | logical_identity
    evidence: dict = field(default_factory=dict)

    def __eq__(self, other):
        if isinstance(other, ZkVerdict):
            return self.verdict == other.verdict
        return self.verdict == other


def css_params(system: CoxeterSystem, q: int, r: int) -> tuple[int, int, int]:
    """Closed-form [[n, k, d]] without enumerating the group."""
    m = system.rank
    if not (-1 <= q < r <= m):
        raise BadParameterError(f"need -1 <= q < r <= m, got q={q}, r={r}, m={m}")
    profile = eulerian.profile_for_system(system)
    n = profile.group_order
    k = profile.prefix_sum(r) - profile.prefix_sum(q)
    d = 2 ** min(q + 1, m - r)
    return n, k, d


def build_css(table: GroupTable, system: CoxeterSystem, q: int, r: int) -> CssCode:
    """Build both classical sides and verify containment and the k identity."""
    m = system.rank
    if not (-1 <= q <= r <= m):
        raise BadParameterError(f"need -1 <= q <= r <= m, got q={q}, r={r}, m={m}")
    c1 = codes.build_code(table, system, m - q - 1)
    c2 = codes.build_code(table, system, r)
    # C1^perp = C(q) must lie inside C2 = C(r); equivalently C2^perp in C1.
    c1_perp = codes.build_code(table, system, q)
    if not gf2.rowspace_contains(c2.genmat, c1_perp.genmat):
        raise AssertionError("containment C1^perp <= C2 violated (engine bug)")
    n = table.size
    k = c1.k + c2.k - n
    if k != c2.k - c1_perp.k:
        raise AssertionError("k identity dim C1 + dim C2 - n violated (engine bug)")
    d = None if q == r else 2 ** min(q + 1, m - r)
    return CssCode(system=system, table=table, q=q, r=r, c1=c1, c2=c2, n=n, k=k, d=d)


def stabilizer_generators(table: GroupTable, q: int, r: int):
    """(S_X, S_Z) as standard-coset lists, deduplicated by representative.

    S_X supports are rank-(m-q) cosets; S_Z supports are rank-(r+1) cosets.
    Every X support meets every Z support evenly, so all pairs commute.
    """
    m = table.rank
    if not (-1 <= q <= r <= m):
        raise BadParameterError(f"need -1 <= q <= r <= m, got q={q}, r={r}, m={m}")
    sx, sz = [], []
    if m - q <= m:
        for J in itertools.combinations(range(m), m - q):
            sx.extend(all_cosets(table, J))
    if r + 1 <= m:
        for J in itertools.combinations(range(m), r + 1):
            sz.extend(all_cosets(table, J))
    sx.sort(key=lambda c: (c.gens, c.representative))
    sz.sort(key=lambda c: (c.gens, c.representative))
    return sx, sz


def export_stabilizers(table: GroupTable, q: int, r: int) -> str:
    """One generator per line: 'X|Z' prefix plus the 0/1 support bitstring."""
    sx, sz = stabilizer_generators(table, q, r)
    lines = []
    for coset in sx:
        lines.append("X" + gf2.BitVector.from_indices(table.size, coset.members).to01())
    for coset in sz:
        lines.append("Z" + gf2.BitVector.from_indices(table.size, coset.members).to01())
    return "\n".join(lines) + "\n"


def params_json(system: CoxeterSystem, q: int, r: int) -> str:
    n, k, d = css_params(system, q, r)
    return json.dumps(
        {"family": system.label, "n": n, "k": k, "d": d, "q": q, "r": r},
        sort_keys=True,
    )


def zk_predict(q: int, r: int, k_level: int, coset_rank: int, m: int | None = None) -> ZkVerdict:
    """Classify transversal Z(k) on a rank-`coset_rank` standard coset support.

    breaks_codespace iff rank <= q + k*r; nontrivial iff
    q + k*r + 1 <= rank <= (k+1)*r; identity iff rank >= (k+1)*r + 1.
    """
    if q < 0 or r <= q:
        raise BadParameterError(f"need 0 <= q < r, got q={q}, r={r}")
    if k_level < 1:
        raise BadParameterError(f"need k_level >= 1, got {k_level}")
    if coset_rank < 0 or (m is not None and coset_rank > m):
        raise BadParameterError(f"bad coset rank {coset_rank}")
    breaks_hi = q + k_level * r
    nontrivial_hi = (k_level + 1) * r
    if breaks_hi > nontrivial_hi:
        # impossible for q < r: q + k*r < r + k*r = (k+1)*r
        raise BadParameterError("verdict intervals do not cover the rank")
    ev = {
        "breaks_max_rank": breaks_hi,
        "nontrivial_max_rank": nontrivial_hi,
        "rank": coset_rank,
    }
    if coset_rank <= breaks_hi:
        return ZkVerdict(BREAKS, ev)
    if coset_rank <= nontrivial_hi:
        return ZkVerdict(NONTRIVIAL, ev)
    return ZkVerdict(IDENTITY, ev)


def _coset_transversal(css: CssCode):
    """Deterministic transversal of C2 / C1^perp plus a basis of C1^perp.

    Returns (quotient_rows, subgroup_rows) as packed word arrays; quotient
    rows extend the C1^perp rref basis to a basis of C2 and are taken from
    the rref of C2 (pivot-ordered), so the choice is reproducible.
    """
    sub = codes.build_code(css.table, css.system, css.q)
    _, sub_rref, _ = gf2.rank_and_rref(sub.genmat)
    _, c2_rref, _ = gf2.rank_and_rref(css.c2.genmat)
    quotient = []
    span = sub_rref
    for i in range(c2_rref.nrows):
        v = c2_rref.row(i)
        if not gf2.in_rowspace(span, v):
            quotient.append(v)
            span = gf2.BitMatrix.from_vectors(span.rows() + [v], n=span.n)
    assert len(quotient) == css.k
    nwords = sub_rref.data.shape[1]
    if quotient:
        qrows = np.array([v.words for v in quotient], dtype=np.uint64)
    else:
        qrows = np.zeros((0, nwords), dtype=np.uint64)
    return qrows, sub_rref.data


def _phase(words: np.ndarray, pos: np.ndarray, neg: np.ndarray, modulus: int) -> int:
    theta = int(np.bitwise_count(words & pos).sum()) - int(
        np.bitwise_count(words & neg).sum()
    )
    return theta % modulus


def zk_simulate(css: CssCode, R: StandardCoset, k_level: int,
                mode: str = "full", signed: bool = True,
                rng_seed: int = 11) -> ZkVerdict:
    """Exact (or sampled) phase analysis of transversal Z(k) on support R.

    By default this simulates the length-signed rotation: Z(k) on the
    even-length elements of R and Z(k)^dagger on the odd-length ones, the
    operator for which the rank-based classification is valid (the uniform
    gate already fails on the 6-qubit Iceberg code, where S^(x6) maps the
    global X stabilizer to minus X^(x6) Z^(x6)).  Pass signed=False for the
    uniform gate.

    Enumerates basis strings of the codespace grouped by coset c + C1^perp
    and tracks theta(v) = sum over w in supp(v) & R of (-1)^len(w), reduced
    mod 2^(k+1) (phase unit pi / 2^k).  A coset with a non-constant phase
    breaks the codespace; constant equal phases give the identity (global
    phase normalized against the 0-coset); otherwise the action is a
    nontrivial logical.
    """
    if k_level < 1:
        raise BadParameterError(f"need k_level >= 1, got {k_level}")
    sub_dim = css.c2.k - css.k  # dim C1^perp
    if mode == "full" and (sub_dim > FULL_MODE_C1PERP_MAX or css.c2.k > FULL_MODE_C2_MAX):
        raise ModeUnavailableError(
            f"full mode limited to dim C1^perp <= {FULL_MODE_C1PERP_MAX} and "
            f"dim C2 <= {FULL_MODE_C2_MAX}; got {sub_dim} and {css.c2.k} "
            "(use mode='randomized')"
        )
    modulus = 1 << (k_level + 1)
    support = gf2.BitVector.from_indices(css.n, R.members).words
    if signed:
        even = [w for w in R.members if int(css.table.length[w]) % 2 == 0]
        pos = gf2.BitVector.from_indices(css.n, even).words
        neg = support & ~pos
    else:
        pos, neg = support, np.zeros_like(support)
    quotient_rows, sub_rows = _coset_transversal(css)

    def coset_rep(mask: int) -> np.ndarray:
        acc = np.zeros(quotient_rows.shape[1] if css.k else sub_rows.shape[1], dtype=np.uint64)
        for j in range(css.k):
            if (mask >> j) & 1:
                acc = acc ^ quotient_rows[j]
        return acc

    if mode == "full":
        phases = []
        for mask in range(1 << css.k):
            rep = coset_rep(mask)
            base = _phase(rep, pos, neg, modulus)
            # Gray-code walk over C1^perp
            cur = rep.copy()
            state = 0
            for g in range(1, 1 << sub_dim):
                flip = (g ^ (g >> 1)) ^ state
                state = g ^ (g >> 1)
                j = flip.bit_length() - 1
                cur ^= sub_rows[j]
                if _phase(cur, pos, neg, modulus) != base:
                    return ZkVerdict(
                        BREAKS,
                        {"coset_mask": mask, "phase": base,
                         "other_phase": _phase(cur, pos, neg, modulus)},
                    )
            phases.append(base)
        ref = phases[0]  # the coset containing 0: global-phase reference
        if all(p == ref for p in phases):
            return ZkVerdict(IDENTITY, {"phase": ref})
        return ZkVerdict(NONTRIVIAL, {"phases": sorted(set(p for p in phases))})

    if mode != "randomized":
        raise BadParameterError(f"mode must be full|randomized, got {mode!r}")

    rng = np.random.default_rng(rng_seed)

    def random_member(mask):
        vec = coset_rep(mask)
        u = int(rng.integers(0, 1 << min(sub_dim, 62))) if sub_dim else 0
        for j in range(min(sub_dim, 62)):
            if (u >> j) & 1:
                vec ^= sub_rows[j]
        return vec

    seen = {}
    nontrivial = False
    for i in range(RANDOMIZED_SAMPLES):
        # always probe the 0-coset first so the global-phase reference exists
        mask = 0 if i == 0 else int(rng.integers(0, 1 << min(css.k, 62)))
        p1 = _phase(random_member(mask), pos, neg, modulus)
        p2 = _phase(random_member(mask), pos, neg, modulus)
        if p1 != p2:
            return ZkVerdict(BREAKS, {"coset_mask": mask,
                                      "phase": p1, "other_phase": p2})
        if mask in seen and seen[mask] != p1:
            return ZkVerdict(BREAKS, {"coset_mask": mask,
                                      "phase": seen[mask], "other_phase": p1})
        seen[mask] = p1
        if p1 != seen[0]:
            nontrivial = True
    verdict = NONTRIVIAL if nontrivial else IDENTITY
    return ZkVerdict(verdict, {"sampled": RANDOMIZED_SAMPLES, "confidence": "sampled"})


def qmu_dimension(n: int, mu: int) -> tuple[int, int]:
    """Logical-qubit count of the order-(mu-1, mu) code on mu dihedral factors.

    Returns (dim, 4**mu).  dim is the central coefficient of
    (t^2 + (2n-2)t + 1)^mu; for n = 3 it is cross-checked against the
    closed-form sum over i of mu!/((i!)^2 (mu-2i)!) * 4^(mu-2i), and the
    strict inequality dim > (1 + mu(mu-1)/16) * 4^mu is asserted for mu >= 4.
    """
    if mu < 1 or n < 2:
        raise BadParameterError(f"need mu >= 1 and n >= 2, got mu={mu}, n={n}")
    prof = eulerian.profile_dihedral(n)
    acc = prof
    for _ in range(mu - 1):
        acc = eulerian.profile_product(acc, prof)
    dim = acc.counts[mu]
    if n == 3:
        closed = sum(
            math.factorial(mu) // (math.factorial(i) ** 2 * math.factorial(mu - 2 * i))
            * 4 ** (mu - 2 * i)
            for i in range(mu // 2 + 1)
        )
        assert dim == closed, "central coefficient disagrees with closed form"
        if mu >= 4:
            assert 16 * dim > (16 + mu * (mu - 1)) * 4**mu, "rate inequality violated"
    return dim, 4**mu
