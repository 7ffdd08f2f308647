"""Independent cross-check oracles used by the self-test and the test suite.

Neither oracle shares code with the main path beyond group tables:

* ``numeric_character_table`` diagonalizes a random combination of class
  matrices in floating point and recovers exact values by rounding eigenvalue
  multiplicities.
* ``relation_quotient_character`` builds kX (x) M over a prime field, with M
  an isotypic block of the regular representation, quotients by the balancing
  relations and takes traces.
"""

from __future__ import annotations

import cmath
from math import gcd, isqrt, lcm

import numpy as np

from .bisets import BisetX
from .characters import Character, _is_prime, _primitive_root
from .cyclotomic import Cyclotomic
from .errors import InternalFault
from .groups import FiniteGroup, generating_sequence, out_group


def numeric_character_table(G: FiniteGroup, seed: int = 0) -> list[Character]:
    cls = G.classes
    r = len(cls)
    co = cls.class_of
    # M_j[i][k] = #{x in C_i : x^-1 z_k in C_j}
    M = np.zeros((r, r, r))
    for k, z in enumerate(cls.reps):
        for x in G.elements():
            M[co[G.m(G.inverse[x], z)], co[x], k] += 1
    rng = np.random.default_rng(seed)
    A = np.tensordot(rng.standard_normal(r), M, axes=1)
    _, vecs = np.linalg.eig(A)
    e = G.exponent
    chars = []
    for c in range(r):
        w = vecs[:, c] / vecs[0, c]
        s = sum(w[k] * w[cls.inverse_class[k]] / cls.sizes[k] for k in range(r))
        d = int(round(abs(cmath.sqrt(G.order / s))))
        raw = [w[k] * d / cls.sizes[k] for k in range(r)]
        values = []
        for k in range(r):
            o = G.element_orders[cls.reps[k]]
            weights = {}
            for l in range(o):
                m = sum(raw[cls.power_class(k, t)] * cmath.exp(-2j * cmath.pi * l * t / o) for t in range(o)) / o
                mi = int(round(m.real))
                if abs(m - mi) > 1e-6:
                    raise InternalFault("numeric multiplicity is not an integer")
                if mi:
                    weights[l * (e // o)] = mi
            values.append(Cyclotomic.from_exponents(e, weights))
        chars.append(Character(G, values))
    return chars


def tables_agree(a: list[Character], b: list[Character]) -> bool:
    return sorted(repr(c.values) for c in a) == sorted(repr(c.values) for c in b)


# -- tensor characters over a prime field ----------------------------------------------

def _prime_1_mod(m: int, floor: int) -> int:
    q = (floor // m + 1) * m + 1
    while not _is_prime(q):
        q += m
    return q


def _rref_mod(A: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    A = A.copy() % q
    rows, cols = A.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, q) % q
        f = A[:, c].copy()
        f[r] = 0
        A = (A - np.outer(f, A[r])) % q
        piv.append(c)
        r += 1
    return A[:r], piv


def relation_quotient_character(X: BisetX, V: Character, q_floor: int = 10 ** 6) -> tuple[list[int], int, int]:
    """Class values (mod q) of kX (x)_{kOut(R)} V computed by explicit linear algebra.

    V must be irreducible.  Returns (values, q, z) where z has order
    lcm(exp Out(K), exp Out(R)) mod q and fixes the embedding of cyclotomics.
    """
    O = out_group(X.R).out
    OK = out_group(X.K).out
    L = lcm(O.exponent, OK.exponent)
    q = _prime_1_mod(L, q_floor)
    z = pow(_primitive_root(q), (q - 1) // L, q)
    zO = pow(z, L // O.exponent, q)
    n = O.order
    d = V.degree
    # central idempotent e_V = (d/|O|) sum_g chi(g^-1) g, kept up to the scalar
    ev = np.array([V(O.inverse[g]).to_mod(q, zO) for g in O.elements()], dtype=np.int64)
    # block M = e_V kO, spanned by e_V * g
    span = np.zeros((n, n), dtype=np.int64)
    for g in O.elements():
        for h in O.elements():
            span[g, O.m(h, g)] = ev[h]
    B, piv = _rref_mod(span, q)
    dim = len(piv)
    if dim != d * d:
        raise InternalFault("isotypic block has the wrong dimension")

    def act(w: int) -> np.ndarray:
        """matrix of left multiplication by w on the block, in B coordinates"""
        moved = np.zeros_like(B)
        for g in O.elements():
            moved[:, O.m(w, g)] = B[:, g]
        return moved[:, piv].T  # column j = coords of w*b_j

    npts = len(X.points)
    rels = []
    for w in generating_sequence(O):
        rho = act(w)
        for x in range(npts):
            xw = X.right_action[x][w]
            for j in range(dim):
                v = np.zeros(npts * dim, dtype=np.int64)
                v[xw * dim + j] += 1
                v[x * dim: (x + 1) * dim] -= rho[:, j]
                rels.append(v % q)
    if rels:
        Rb, rpiv = _rref_mod(np.array(rels, dtype=np.int64), q)
    else:
        Rb, rpiv = np.zeros((0, npts * dim), dtype=np.int64), []
    inv_d = pow(d, -1, q)
    values = []
    for u in OK.classes.reps:
        perm = X.left_action[u]
        fixed = sum(1 for x in range(npts) if perm[x] == x)
        tr_rel = 0
        for row, c in zip(Rb, rpiv):
            # (u.row)[c] = row at the coordinate that u sends onto c
            x, j = divmod(c, dim)
            src = perm.index(x)
            tr_rel += int(row[src * dim + j])
        values.append((fixed * dim - tr_rel) * inv_d % q)
    return values, q, z


def character_mod(chi: Character, q: int, z: int, L: int) -> list[int]:
    """Class values of chi under zeta_L -> z."""
    return [v.lift(L).to_mod(q, z) for v in chi.values]
