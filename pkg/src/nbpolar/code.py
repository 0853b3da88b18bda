"""Code specification, per-node kernel coefficients, encoders, and the
generator-matrix objects (first inverse column, last row, scaled generator,
facilitator) that the fast decoder and the property tests rely on.

Array conventions: symbol vectors are integer ndarrays, batched as
``(B, length)`` with a plain ``(length,)`` vector accepted everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf import Field, gf16, gf4


@dataclass(frozen=True)
class NodeId:
    """Tree node (nu, s): level s with 0 <= nu < 2^(n-s)."""

    nu: int
    s: int


class Kernels:
    """Per-node kernel coefficients (mu, gamma, delta) of a length-2^n code.

    Stored as one coefficient triple per tree node (nu, s) for 1 <= s <= n;
    all butterflies inside a node's top polarization stage share its triple.
    """

    def __init__(self, field: Field, n: int, table):
        self.field = field
        self.n = n
        self._mu = []
        self._gamma = []
        self._delta = []
        for s in range(n + 1):
            width = 1 << (n - s) if s >= 1 else 0
            self._mu.append(np.ones(width, dtype=np.int64))
            self._gamma.append(np.ones(width, dtype=np.int64))
            self._delta.append(np.ones(width, dtype=np.int64))
        for (nu, s), (m, g, d) in table.items():
            if not 1 <= s <= n or not 0 <= nu < (1 << (n - s)):
                raise ValueError(f"node ({nu}, {s}) out of range for n={n}")
            if m == 0 or g == 0 or d == 0:
                raise ValueError("kernel coefficients must be nonzero")
            if not (m < field.q and g < field.q and d < field.q):
                raise ValueError("kernel coefficient outside the field")
            self._mu[s][nu] = m
            self._gamma[s][nu] = g
            self._delta[s][nu] = d
        self._uniform_cache: dict[tuple[int, int], tuple | None] = {}

    @classmethod
    def uniform(cls, field: Field, n: int, triple) -> "Kernels":
        m, g, d = triple
        table = {
            (nu, s): (m, g, d)
            for s in range(1, n + 1)
            for nu in range(1 << (n - s))
        }
        return cls(field, n, table)

    def triple(self, nu: int, s: int):
        return (
            int(self._mu[s][nu]),
            int(self._gamma[s][nu]),
            int(self._delta[s][nu]),
        )

    def level(self, s: int):
        return self._mu[s], self._gamma[s], self._delta[s]

    def subtree_triple(self, nu: int, s: int):
        """The single (mu, gamma, delta) shared by every unit in the subtree
        rooted at (nu, s), or None if the subtree mixes coefficients."""
        if s == 0:
            return None
        key = (nu, s)
        if key not in self._uniform_cache:
            t = self.triple(nu, s)
            if s == 1:
                self._uniform_cache[key] = t
            else:
                left = self.subtree_triple(2 * nu, s - 1)
                right = self.subtree_triple(2 * nu + 1, s - 1)
                self._uniform_cache[key] = t if left == t and right == t else None
        return self._uniform_cache[key]


@dataclass(frozen=True)
class CodeSpec:
    """A length-2^n non-binary polar code over GF(2^p).

    Parameters
    ----------
    field : Field
    n : int
        log2 of the code length.
    info_set : sequence of int
        The K information positions; the complement is frozen to 0.
    kernels : Kernels
    s0 : int or None
        Simplification threshold for generalized codes: when set, every
        kernel triple at levels below s0 must be (1, 1, 1) and special-node
        sizes are capped at 2^(s0-1) during classification.
    """

    field: Field
    n: int
    info_set: np.ndarray
    kernels: Kernels
    s0: int | None = None
    info_mask: np.ndarray = dc_field(init=False, repr=False)

    def __post_init__(self):
        N = 1 << self.n
        info = np.unique(np.asarray(self.info_set, dtype=np.int64))
        if info.size and (info[0] < 0 or info[-1] >= N):
            raise ValueError("information positions out of range")
        if np.asarray(self.info_set).size != info.size:
            raise ValueError("information set contains duplicates")
        mask = np.zeros(N, dtype=bool)
        mask[info] = True
        object.__setattr__(self, "info_set", info)
        object.__setattr__(self, "info_mask", mask)
        if self.kernels.n != self.n or self.kernels.field != self.field:
            raise ValueError("kernel table does not match the code")
        if self.s0 is not None:
            if not 1 <= self.s0 <= self.n + 1:
                raise ValueError(f"s0 must be in [1, {self.n + 1}]")
            for s in range(1, self.s0):
                for nu in range(1 << (self.n - s)):
                    if self.kernels.triple(nu, s) != (1, 1, 1):
                        raise ValueError(
                            f"simplified code requires unit kernels below "
                            f"s0={self.s0}, found {self.kernels.triple(nu, s)} "
                            f"at ({nu}, {s})"
                        )

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def K(self) -> int:
        return int(self.info_set.size)

    @property
    def rate(self) -> float:
        return self.K / self.N

    def frozen_set(self) -> np.ndarray:
        return np.flatnonzero(~self.info_mask)

    def node_mask(self, node: NodeId) -> np.ndarray:
        """Information mask of the node's leaf block (local indexing)."""
        Ns = 1 << node.s
        return self.info_mask[Ns * node.nu : Ns * (node.nu + 1)]

    def sets_A(self, node: NodeId):
        """Local information/frozen index sets of a node."""
        mask = self.node_mask(node)
        return np.flatnonzero(mask), np.flatnonzero(~mask)


def make_code(field: Field, n: int, info_set, kernel_triple=(1, 1, 1),
              kernel_table=None, s0=None) -> CodeSpec:
    """Convenience constructor: uniform triple plus optional per-node overrides."""
    kern = Kernels.uniform(field, n, kernel_triple)
    if kernel_table:
        merged = {
            (nu, s): kern.triple(nu, s)
            for s in range(1, n + 1)
            for nu in range(1 << (n - s))
        }
        merged.update(kernel_table)
        kern = Kernels(field, n, merged)
    return CodeSpec(field, n, np.asarray(info_set), kern, s0)


# ---------------------------------------------------------------------------
# Uniform-kernel matrix objects (Kronecker constructions)
# ---------------------------------------------------------------------------

def kron_generator(field: Field, triple, k: int) -> np.ndarray:
    """The 2^k x 2^k generator built from one kernel [[mu,0],[gamma,delta]]."""
    m, g, d = triple
    G = np.array([[1]], dtype=np.int64)
    for _ in range(k):
        top = np.concatenate([field.mul(m, G), np.zeros_like(G)], axis=1)
        bot = np.concatenate([field.mul(g, G), field.mul(d, G)], axis=1)
        G = np.concatenate([top, bot], axis=0)
    return G


def g0_inv_uniform(field: Field, triple, k: int) -> np.ndarray:
    """First column of the inverse generator, by the halving recursion
    g0^(k) = [(1/mu) g0^(k-1); (gamma/(mu delta)) g0^(k-1)]."""
    m, g, d = triple
    v = np.array([1], dtype=np.int64)
    top = field.inv(m)
    bot = field.div(g, field.mul(m, d))
    for _ in range(k):
        v = np.concatenate([field.mul(top, v), field.mul(bot, v)])
    return v


def last_row_uniform(field: Field, triple, k: int) -> np.ndarray:
    """Last row of the generator: r^(k) = [gamma r^(k-1), delta r^(k-1)]."""
    m, g, d = triple
    v = np.array([1], dtype=np.int64)
    for _ in range(k):
        v = np.concatenate([field.mul(g, v), field.mul(d, v)])
    return v


def gbar(field: Field, triple, k: int) -> np.ndarray:
    """Generator with columns scaled by the first inverse column: every row's
    nonzero entries collapse to one value (the facilitator column entry)."""
    G = kron_generator(field, triple, k)
    return field.mul(G, g0_inv_uniform(field, triple, k)[None, :])


def facilitator(field: Field, mu: int, gamma: int, k: int) -> np.ndarray:
    """k-th Kronecker power of [[1, 0], [gamma/mu, 1]]."""
    r = field.div(gamma, mu)
    F = np.array([[1]], dtype=np.int64)
    for _ in range(k):
        top = np.concatenate([F, np.zeros_like(F)], axis=1)
        bot = np.concatenate([field.mul(r, F), F], axis=1)
        F = np.concatenate([top, bot], axis=0)
    return F


# ---------------------------------------------------------------------------
# Per-node (generalized) matrix objects
# ---------------------------------------------------------------------------

def generator(spec: CodeSpec, node: NodeId) -> np.ndarray:
    """Dense generator of the subtree rooted at ``node`` (test-sized use)."""
    f = spec.field

    def build(nu, s):
        if s == 0:
            return np.array([[1]], dtype=np.int64)
        m, g, d = spec.kernels.triple(nu, s)
        L = build(2 * nu, s - 1)
        R = build(2 * nu + 1, s - 1)
        top = np.concatenate([f.mul(m, L), np.zeros_like(L)], axis=1)
        bot = np.concatenate([f.mul(g, R), f.mul(d, R)], axis=1)
        return np.concatenate([top, bot], axis=0)

    return build(node.nu, node.s)


def g0_inv(spec: CodeSpec, node: NodeId, k: int) -> np.ndarray:
    """First inverse-generator column of the top k levels under ``node``;
    the recursion follows the left spine of the subtree."""
    f = spec.field

    def build(nu, s, depth):
        if depth == 0:
            return np.array([1], dtype=np.int64)
        m, g, d = spec.kernels.triple(nu, s)
        sub = build(2 * nu, s - 1, depth - 1)
        return np.concatenate(
            [f.mul(f.inv(m), sub), f.mul(f.div(g, f.mul(m, d)), sub)]
        )

    if k > node.s:
        raise ValueError(f"k={k} exceeds node level {node.s}")
    return build(node.nu, node.s, k)


def last_row(spec: CodeSpec, node: NodeId, k: int) -> np.ndarray:
    """Last generator row of the top k levels under ``node`` (right spine)."""
    f = spec.field

    def build(nu, s, depth):
        if depth == 0:
            return np.array([1], dtype=np.int64)
        m, g, d = spec.kernels.triple(nu, s)
        sub = build(2 * nu + 1, s - 1, depth - 1)
        return np.concatenate([f.mul(g, sub), f.mul(d, sub)])

    if k > node.s:
        raise ValueError(f"k={k} exceeds node level {node.s}")
    return build(node.nu, node.s, k)


# ---------------------------------------------------------------------------
# Encoders
# ---------------------------------------------------------------------------

def _as_batch(u):
    u = np.asarray(u, dtype=np.int64)
    squeeze = u.ndim == 1
    return (u[None, :] if squeeze else u), squeeze


def subcodeword(spec: CodeSpec, u, node: NodeId) -> np.ndarray:
    """Encode a length-2^s input slice through the subtree at ``node``:
    n butterfly stages of (c0, c1) = (mu*u0 + gamma*u1, delta*u1)."""
    f = spec.field
    c, squeeze = _as_batch(u)
    Ns = 1 << node.s
    if c.shape[-1] != Ns:
        raise ValueError(f"expected length {Ns}, got {c.shape[-1]}")
    c = c.copy()
    B = c.shape[0]
    for s in range(1, node.s + 1):
        mu, ga, de = spec.kernels.level(s)
        lo, hi = node.nu << (node.s - s), (node.nu + 1) << (node.s - s)
        m = mu[lo:hi][None, :, None]
        g = ga[lo:hi][None, :, None]
        d = de[lo:hi][None, :, None]
        blk = c.reshape(B, hi - lo, 2, 1 << (s - 1))
        a, b = blk[:, :, 0, :], blk[:, :, 1, :]
        blk[:, :, 0, :] = f.mul(m, a) ^ f.mul(g, b)
        blk[:, :, 1, :] = f.mul(d, b)
        c = blk.reshape(B, Ns)
    return c[0] if squeeze else c


def encode(spec: CodeSpec, u) -> np.ndarray:
    """Full-length transform c = u^T * (code generator), O(N log N)."""
    u_arr = np.asarray(u)
    if u_arr.shape[-1] != spec.N:
        raise ValueError(f"expected length {spec.N}, got {u_arr.shape[-1]}")
    return subcodeword(spec, u, NodeId(0, spec.n))


def transform_inverse(spec: CodeSpec, c, node: NodeId | None = None) -> np.ndarray:
    """Invert the butterfly transform: recover the input slice from a
    (sub)codeword."""
    f = spec.field
    if node is None:
        node = NodeId(0, spec.n)
    u, squeeze = _as_batch(c)
    Ns = 1 << node.s
    if u.shape[-1] != Ns:
        raise ValueError(f"expected length {Ns}, got {u.shape[-1]}")
    u = u.copy()
    B = u.shape[0]
    for s in range(node.s, 0, -1):
        mu, ga, de = spec.kernels.level(s)
        lo, hi = node.nu << (node.s - s), (node.nu + 1) << (node.s - s)
        m_inv = f.inv_table[mu[lo:hi]][None, :, None]
        g = ga[lo:hi][None, :, None]
        d_inv = f.inv_table[de[lo:hi]][None, :, None]
        blk = u.reshape(B, hi - lo, 2, 1 << (s - 1))
        b = f.mul(d_inv, blk[:, :, 1, :])
        blk[:, :, 0, :] = f.mul(m_inv, blk[:, :, 0, :] ^ f.mul(g, b))
        blk[:, :, 1, :] = b
        u = blk.reshape(B, Ns)
    return u[0] if squeeze else u


def encode_systematic(spec: CodeSpec, message):
    """Systematic encoding: place the K message symbols at the information
    positions of the codeword while keeping the frozen inputs at zero.

    Solves the triangular constraint system by one right-then-left pass per
    node (the right child fixes the second codeword half, after which the
    first-half targets are known), O(N log N).

    Returns
    -------
    (u, c) : input vector and codeword, with c[info_set] == message and
        u[frozen] == 0.  Message symbols map to ``sorted(info_set)`` order.
    """
    f = spec.field
    msg, squeeze = _as_batch(message)
    if msg.shape[-1] != spec.K:
        raise ValueError(f"expected {spec.K} message symbols, got {msg.shape[-1]}")
    B = msg.shape[0]
    targets = np.zeros((B, spec.N), dtype=np.int64)
    targets[:, spec.info_set] = msg
    u = np.zeros((B, spec.N), dtype=np.int64)

    def solve(nu, s, t):
        # t: codeword targets for this node, meaningful at info positions only
        if s == 0:
            if spec.info_mask[nu]:
                u[:, nu] = t[:, 0]
                return t.copy()
            return np.zeros_like(t)
        m, g, d = spec.kernels.triple(nu, s)
        h = 1 << (s - 1)
        c_right = solve(2 * nu + 1, s - 1, f.mul(f.inv(d), t[:, h:]))
        t_left = f.mul(f.inv(m), t[:, :h] ^ f.mul(g, c_right))
        c_left = solve(2 * nu, s - 1, t_left)
        return np.concatenate(
            [f.mul(m, c_left) ^ f.mul(g, c_right), f.mul(d, c_right)], axis=1
        )

    c = solve(0, spec.n, targets)
    if squeeze:
        return u[0], c[0]
    return u, c


def gf_matmul(field: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Dense matrix product over the field (oracle-sized inputs)."""
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for k in range(A.shape[1]):
        out ^= field.mul(A[:, k][:, None], B[k, :][None, :])
    return out


# Canonical field builders for config files.
def field_from_config(cfg) -> Field:
    if isinstance(cfg, str):
        return {"gf4": gf4, "gf16": gf16}[cfg.lower()]()
    return Field(int(cfg["p"]), cfg["primpoly"])
