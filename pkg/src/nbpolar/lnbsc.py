"""LLR-domain symbol-by-symbol successive-cancellation decoding.

The decoder walks the code's binary tree depth first.  Toward the left child
it runs a check-node (CN) update per column pair, toward the right child a
variable-node (VN) update using the left child's hard output, and upward it
recombines hard symbols through the kernel.

All soft messages are ``(..., cols, q)`` arrays, non-negative with minimum
entry zero per column.  The batch axis (frames decoded in parallel) is
optional and never affects the schedule, so batching is exact.
"""

from __future__ import annotations

import numpy as np

from .channel import QuantSpec
from .code import CodeSpec, NodeId
from .gf import Field


def _requant(x: np.ndarray, quant: QuantSpec | None) -> np.ndarray:
    if quant is None:
        return x
    return np.clip(np.rint(x), 0.0, quant.internal_max)


def cn_update(field: Field, la, lb, coeffs, mode: str = "ems",
              quant: QuantSpec | None = None) -> np.ndarray:
    """Check-node update: soft message for the left-child symbol.

    Combines the LLR vector of c0 = mu*a + gamma*b (``la``) with the vector
    of c1 = delta*b (``lb``) over all symbol pairs summing to each candidate,
    taking the minimum (EMS) or the full negative log-sum-exp (exact), then
    relabels for the kernel coefficients and restores the minimum-zero
    convention.

    Parameters
    ----------
    la, lb : (..., q) arrays.
    coeffs : (mu, gamma, delta).
    mode : "ems" or "exact".
    """
    la = np.asarray(la, dtype=np.float64)
    lb = np.asarray(lb, dtype=np.float64)
    q = field.q
    mu, gamma, delta = coeffs
    # lb relabelled to the LLR vector of (gamma/delta) * b
    w = field.div(gamma, delta)
    lbt = lb if w == 1 else lb[..., field.scale_index(w)]

    xor = np.arange(q)[:, None] ^ np.arange(q)[None, :]
    out = None
    for z in range(q):
        cand = la[..., z : z + 1] + lbt[..., xor[z]]
        out = cand if out is None else np.minimum(out, cand)
    if mode == "exact":
        acc = np.zeros_like(out)
        for z in range(q):
            cand = la[..., z : z + 1] + lbt[..., xor[z]]
            acc += np.exp(-(cand - out))
        out = out - np.log(acc)
    elif mode != "ems":
        raise ValueError(f"unknown CN mode {mode!r}")

    if mu != 1:
        # out currently describes mu * (left symbol)
        out = out[..., field.mul_table[mu]]
    out = out - out.min(axis=-1, keepdims=True)
    return _requant(out, quant)


def vn_update(field: Field, la, lb, chi_left, coeffs,
              quant: QuantSpec | None = None) -> np.ndarray:
    """Variable-node update: soft message for the right-child symbol given
    the left child's hard output.

    Entry theta reads la at mu*chi + gamma*theta, adds lb at delta*theta,
    and the per-column minimum is subtracted so the output minimum is zero.

    ``la``/``lb`` are (..., cols, q); ``chi_left`` is (..., cols).
    """
    la = np.asarray(la, dtype=np.float64)
    lb = np.asarray(lb, dtype=np.float64)
    chi = np.asarray(chi_left)
    mu, gamma, delta = coeffs
    q = field.q

    idx = field.mul_table[gamma][: q] ^ field.mul_table[mu, chi][..., None]
    bra = np.take_along_axis(la, np.broadcast_to(idx, la.shape), axis=-1)
    brb = lb if delta == 1 else lb[..., field.scale_index(field.inv(delta))]
    out = bra + brb
    out = out - out.min(axis=-1, keepdims=True)
    return _requant(out, quant)


def combine_hard(field: Field, chi_left, chi_right, coeffs) -> np.ndarray:
    """Hard-symbol recombination through the kernel:
    [mu*chi_left + gamma*chi_right, delta*chi_right]."""
    mu, gamma, delta = coeffs
    top = field.mul(mu, chi_left) ^ field.mul(gamma, chi_right)
    return np.concatenate([top, field.mul(delta, chi_right)], axis=-1)


def hard_decision(llrs: np.ndarray) -> np.ndarray:
    """Column-wise argmin with lowest-index tie break."""
    return np.argmin(llrs, axis=-1)


class LnbscDecoder:
    """Baseline tree-traversal SC decoder.

    Parameters
    ----------
    spec : CodeSpec
    mode : "ems" (default) or "exact" check-node rule.
    quant : QuantSpec or None
        When set, every CN/VN output is rounded and saturated at the
        internal width.  Channel LLRs are expected to be pre-quantized.
    """

    def __init__(self, spec: CodeSpec, mode: str = "ems",
                 quant: QuantSpec | None = None):
        if mode not in ("ems", "exact"):
            raise ValueError(f"unknown CN mode {mode!r}")
        self.spec = spec
        self.mode = mode
        self.quant = quant

    def decode(self, llrs: np.ndarray, genie_u=None, error_counts=None):
        """Decode channel symbol LLRs.

        Parameters
        ----------
        llrs : (N, q) or (B, N, q) channel symbol LLRs.
        genie_u : optional (B, N) true inputs; when given, every leaf
            decision is recorded against the truth and then replaced by it
            (construction support).
        error_counts : optional (N,) int array accumulating genie mismatches.

        Returns
        -------
        (u_hat, chi) : leaf decisions and the estimated codeword, shaped
            like the input batch.
        """
        llrs = np.asarray(llrs, dtype=np.float64)
        squeeze = llrs.ndim == 2
        if squeeze:
            llrs = llrs[None]
        if llrs.shape[1] != self.spec.N or llrs.shape[2] != self.spec.field.q:
            raise ValueError(
                f"expected (*, {self.spec.N}, {self.spec.field.q}) LLRs, "
                f"got {llrs.shape}"
            )
        B = llrs.shape[0]
        u_hat = np.zeros((B, self.spec.N), dtype=np.int64)
        if genie_u is not None:
            genie_u = np.asarray(genie_u)
            if genie_u.ndim == 1:
                genie_u = genie_u[None]
        chi = self._descend(0, self.spec.n, llrs, u_hat, genie_u, error_counts)
        if squeeze:
            return u_hat[0], chi[0]
        return u_hat, chi

    def _descend(self, nu, s, L, u_hat, genie_u, err):
        spec = self.spec
        if s == 0:
            if spec.info_mask[nu]:
                dec = hard_decision(L[:, 0, :])
            else:
                dec = np.zeros(L.shape[0], dtype=np.int64)
            if genie_u is not None:
                truth = genie_u[:, nu]
                if err is not None:
                    err[nu] += int(np.count_nonzero(dec != truth))
                dec = truth
            u_hat[:, nu] = dec
            return dec[:, None]
        coeffs = spec.kernels.triple(nu, s)
        h = 1 << (s - 1)
        la, lb = L[:, :h, :], L[:, h:, :]
        left_in = cn_update(spec.field, la, lb, coeffs, self.mode, self.quant)
        chi_left = self._descend(2 * nu, s - 1, left_in, u_hat, genie_u, err)
        right_in = vn_update(spec.field, la, lb, chi_left, coeffs, self.quant)
        chi_right = self._descend(2 * nu + 1, s - 1, right_in, u_hat, genie_u, err)
        return combine_hard(spec.field, chi_left, chi_right, coeffs)


def decode(spec: CodeSpec, llrs, mode: str = "ems",
           quant: QuantSpec | None = None):
    """One-shot wrapper around :class:`LnbscDecoder`."""
    return LnbscDecoder(spec, mode, quant).decode(llrs)
