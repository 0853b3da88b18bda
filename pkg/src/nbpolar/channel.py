"""BPSK over AWGN, bit LLRs, bit-to-symbol LLR conversion, and fixed-point
quantization.

LLR matrices are laid out ``(..., positions, q)`` with the symbol axis last.
Every emitted symbol-LLR vector is non-negative with minimum entry zero (the
most likely symbol).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Stand-in for an infinite LLR in floating-point mode; large enough that no
# sum over a frame can promote a wrong symbol, small enough to square safely.
CERTAIN_LLR = 1.0e9


@dataclass(frozen=True)
class QuantSpec:
    """Uniform saturating quantizer widths for channel and internal LLRs."""

    channel_bits: int = 5
    internal_bits: int = 6
    scale: float = 2.0

    def __post_init__(self):
        if self.channel_bits < 2 or self.internal_bits < 2:
            raise ValueError("quantizer widths must be at least 2 bits")
        if self.scale <= 0:
            raise ValueError("quantizer scale must be positive")

    @property
    def channel_max(self) -> float:
        return float((1 << self.channel_bits) - 1)

    @property
    def internal_max(self) -> float:
        return float((1 << self.internal_bits) - 1)


def bpsk_modulate(bits: np.ndarray) -> np.ndarray:
    """Map bits to antipodal symbols, 0 -> +1 and 1 -> -1."""
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def bpsk_awgn(bits: np.ndarray, sigma: float, rng) -> np.ndarray:
    """Transmit bits as BPSK over AWGN with noise std sigma; SNR is 1/sigma^2."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    x = bpsk_modulate(bits)
    return x + rng.normal(0.0, sigma, size=x.shape)


def bit_llr(y: np.ndarray, sigma: float) -> np.ndarray:
    """AWGN bit LLRs 2y/sigma^2; positive values favour bit 0."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return 2.0 * np.asarray(y) / (sigma * sigma)


def hard_decision_bits(eta: np.ndarray) -> np.ndarray:
    """0 where the LLR is positive, 1 otherwise (ties go to 1)."""
    return (np.asarray(eta) <= 0).astype(np.int64)


def symbols_to_bits(symbols: np.ndarray, p: int) -> np.ndarray:
    """Expand field symbols to their p-bit representation, MSB first."""
    symbols = np.asarray(symbols)
    shifts = np.arange(p - 1, -1, -1)
    bits = (symbols[..., None] >> shifts) & 1
    return bits.reshape(*symbols.shape[:-1], symbols.shape[-1] * p)


def bits_to_symbols(bits: np.ndarray, p: int) -> np.ndarray:
    bits = np.asarray(bits)
    groups = bits.reshape(*bits.shape[:-1], bits.shape[-1] // p, p)
    weights = 1 << np.arange(p - 1, -1, -1)
    return (groups * weights).sum(axis=-1)


def symbol_llrs_from_bits(eta: np.ndarray, p: int) -> np.ndarray:
    """Convert p consecutive bit LLRs per symbol into a length-q symbol-LLR
    vector: entry theta sums |eta_j| over the bits where theta disagrees with
    the hard decision.  The hard-decision symbol lands on zero.

    Parameters
    ----------
    eta : (..., N*p) bit LLRs, symbol i owning bits [i*p, (i+1)*p).
    p : bits per symbol.

    Returns
    -------
    (..., N, q) array of non-negative LLRs with per-position minimum 0.
    """
    eta = np.asarray(eta, dtype=np.float64)
    if eta.shape[-1] % p:
        raise ValueError(f"bit count {eta.shape[-1]} is not a multiple of {p}")
    grouped = eta.reshape(*eta.shape[:-1], eta.shape[-1] // p, p)
    hd = (grouped <= 0).astype(np.float64)
    mag = np.abs(grouped)
    theta_bits = ((np.arange(1 << p)[:, None] >> np.arange(p - 1, -1, -1)) & 1)
    theta_bits = theta_bits.astype(np.float64)
    # entry theta: sum_j (theta(j) XOR hd_j) * |eta_j|
    agree = np.einsum("tj,...ij->...it", theta_bits, mag * (1.0 - hd))
    flip = np.einsum("tj,...ij->...it", 1.0 - theta_bits, mag * hd)
    return agree + flip


def channel_llrs(codeword_symbols, p: int, sigma: float, rng,
                 quant: QuantSpec | None = None):
    """Full transmit path: symbols -> bits -> BPSK/AWGN -> symbol LLRs."""
    bits = symbols_to_bits(np.asarray(codeword_symbols), p)
    y = bpsk_awgn(bits, sigma, rng)
    llrs = symbol_llrs_from_bits(bit_llr(y, sigma), p)
    if quant is not None:
        llrs = quantize(llrs, quant.channel_bits, quant.scale)
    return llrs


def noiseless_llrs(codeword_symbols, p: int, quant: QuantSpec | None = None):
    """Certain channel observations: saturated bit LLRs of the true bits."""
    bits = symbols_to_bits(np.asarray(codeword_symbols), p)
    eta = (1.0 - 2.0 * bits) * CERTAIN_LLR
    llrs = symbol_llrs_from_bits(eta, p)
    if quant is not None:
        llrs = quantize(llrs, quant.channel_bits, quant.scale)
    return llrs


def quantize(llrs: np.ndarray, bits: int, scale: float = 1.0) -> np.ndarray:
    """Uniform saturating quantization of non-negative LLR vectors: scale,
    round, clip to [0, 2^bits - 1], then restore the minimum-zero convention
    per position."""
    out = np.clip(np.rint(np.asarray(llrs, dtype=np.float64) * scale),
                  0.0, float((1 << bits) - 1))
    return out - out.min(axis=-1, keepdims=True)
