"""Arithmetic over GF(2^p) and symbol-index permutation maps for LLR vectors.

Field elements are integers in ``[0, q)`` whose binary digits are the
coefficients of a polynomial in alpha: bit ``i`` of the integer is the
coefficient of ``alpha^i``.  With this encoding, addition is XOR and the
``p``-bit channel representation of a symbol is MSB-first, i.e. the first
transmitted bit of a symbol carries the ``alpha^(p-1)`` coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Default primitive polynomials, bit i = coefficient of x^i.
PRIMPOLY_GF4 = 0b111        # x^2 + x + 1
PRIMPOLY_GF16 = 0b10011     # x^4 + x + 1


def _poly_to_int(primpoly) -> int:
    """Accept an int bitmask, a '10011'-style bit string (degree-p first),
    or a coefficient list [a0, .., ap]."""
    if isinstance(primpoly, (int, np.integer)):
        return int(primpoly)
    if isinstance(primpoly, str):
        s = primpoly.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"bad polynomial bit-string {primpoly!r}")
        return int(s, 2)
    coeffs = list(primpoly)
    if set(coeffs) - {0, 1}:
        raise ValueError("polynomial coefficients must be 0/1")
    return sum(int(a) << i for i, a in enumerate(coeffs))


@dataclass(frozen=True)
class PermMap:
    """A bijection on symbol indices; ``map[theta]`` is the image of theta."""

    map: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.map)
        q = m.shape[0]
        if sorted(m.tolist()) != list(range(q)):
            raise ValueError("permutation map is not a bijection")
        object.__setattr__(self, "map", m)

    def compose(self, other: "PermMap") -> "PermMap":
        """Return the map c with apply(c, v) == apply(self, apply(other, v))."""
        return PermMap(other.map[self.map])

    def inverse(self) -> "PermMap":
        inv = np.empty_like(self.map)
        inv[self.map] = np.arange(self.map.shape[0])
        return PermMap(inv)


def apply_perm(perm: PermMap, llr: np.ndarray) -> np.ndarray:
    """Re-index an LLR vector (symbol axis last): out[theta] = in[perm.map[theta]]."""
    llr = np.asarray(llr)
    if llr.shape[-1] != perm.map.shape[0]:
        raise ValueError(
            f"length mismatch: vector has {llr.shape[-1]} entries, "
            f"map has {perm.map.shape[0]}"
        )
    return llr[..., perm.map]


class Field:
    """GF(2^p) with log/antilog tables built from a primitive polynomial.

    Parameters
    ----------
    p : int
        Extension degree, 2 <= p <= 8.
    primpoly : int | str | sequence
        Primitive polynomial f(x) of degree p; int bitmask (bit i is the
        coefficient of x^i), bit string such as "10011" (degree-p bit first),
        or coefficient list [a0, ..., ap].

    Raises
    ------
    ValueError
        If the polynomial has the wrong degree or is not primitive (alpha
        fails to generate all q-1 nonzero elements).

    Instances are immutable after construction and safe to share between
    workers; all operations are pure table lookups.
    """

    def __init__(self, p: int, primpoly) -> None:
        if not 2 <= p <= 8:
            raise ValueError(f"extension degree must be in [2, 8], got {p}")
        poly = _poly_to_int(primpoly)
        if poly.bit_length() != p + 1:
            raise ValueError(
                f"polynomial 0b{poly:b} does not have degree {p}"
            )
        self.p = p
        self.q = 1 << p
        self.primpoly = poly

        q = self.q
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            if log[x] >= 0:
                raise ValueError(
                    f"0b{poly:b} is not primitive: alpha^{i} repeats "
                    f"alpha^{log[x]} (= {x})"
                )
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & q:
                x ^= poly
        if x != 1:
            raise ValueError(f"0b{poly:b} is not primitive: alpha^{q-1} != 1")
        exp[q - 1:] = exp[: q - 1]
        self.exp = exp
        self.log = log

        # Dense q x q product table; q <= 256 keeps this tiny and makes every
        # vectorised multiply a single fancy-index.
        a = np.arange(q)
        logs = log[a][:, None] + log[a][None, :]
        self.mul_table = np.where(
            (a[:, None] == 0) | (a[None, :] == 0), 0, exp[logs % (q - 1)]
        ).astype(np.int64)
        inv_table = np.zeros(q, dtype=np.int64)
        inv_table[1:] = exp[(q - 1 - log[1:q]) % (q - 1)]
        self.inv_table = inv_table

    # -- element arithmetic -------------------------------------------------

    def add(self, a, b):
        """Field addition (bitwise XOR); works elementwise on arrays."""
        return a ^ b

    def mul(self, a, b):
        """Field multiplication; works elementwise on arrays."""
        return self.mul_table[a, b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return int(self.inv_table[a])

    def div(self, a, b):
        return self.mul_table[a, self.inv_table[b]]

    def pow(self, a: int, k: int) -> int:
        """a**k with integer k of either sign (a != 0 when k < 0)."""
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("0 has no negative powers")
            return 0 if k else 1
        if k == 0:
            return 1
        return int(self.exp[(int(self.log[a]) * k) % (self.q - 1)])

    def alpha_pow(self, k: int) -> int:
        """alpha^k as a symbol value."""
        return int(self.exp[k % (self.q - 1)])

    # -- permutation maps ---------------------------------------------------

    def mul_perm(self, gamma: int) -> PermMap:
        """Index map theta -> gamma * theta for a nonzero constant gamma.

        Applied to the LLR vector of ``gamma * c`` it yields the vector of
        ``c``; equivalently entry theta of the result is the input entry for
        symbol ``gamma * theta``.
        """
        if gamma == 0:
            raise ValueError("multiplicative permutation requires gamma != 0")
        return PermMap(self.mul_table[gamma].copy())

    def add_perm(self, beta: int) -> PermMap:
        """Index map theta -> theta + beta (self-inverse in characteristic 2)."""
        return PermMap(np.arange(self.q) ^ beta)

    # Gather index rows used by the decoders: ``llr[..., scale_index(g)]`` is
    # the LLR vector of g*X given the vector of X, and ``llr[..., shift_index(b)]``
    # the vector of X+b.
    def scale_index(self, gamma: int) -> np.ndarray:
        return self.mul_table[self.inv_table[gamma]]

    def shift_index(self, beta: int) -> np.ndarray:
        return np.arange(self.q) ^ beta

    def configuration_sets(self):
        """For each phi, the q pairs (z0, z1) with z0 + z1 = phi."""
        q = self.q
        return [[(z0, z0 ^ phi) for z0 in range(q)] for phi in range(q)]

    def __repr__(self) -> str:
        return f"Field(p={self.p}, primpoly=0b{self.primpoly:b})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Field)
            and other.p == self.p
            and other.primpoly == self.primpoly
        )

    def __hash__(self) -> int:
        return hash((self.p, self.primpoly))


def gf4() -> Field:
    """GF(4) with f(x) = x^2 + x + 1."""
    return Field(2, PRIMPOLY_GF4)


def gf16() -> Field:
    """GF(16) with f(x) = x^4 + x + 1."""
    return Field(4, PRIMPOLY_GF16)
