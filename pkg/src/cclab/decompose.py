"""Frequency-wise Helmholtz-type decomposition v = (kernel part) + A* w.

Per nonzero frequency, bPart^ = P(xi) v^ with P the orthogonal projection
onto ker A(xi), aStarPart^ = (I - P) v^, and w^ = (A A^T)^+ (i^l A) v^ is the
minimal-norm potential (gauge fixed by the pseudoinverse).  The zero mode is
assigned to the kernel part (P(0) := identity convention).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import symbol as sym_mod
from .field import GridField, fft, ifft, xi_grids, apply_symbol
from .norms import evaluate_norm, neg_sobolev_norm, lebesgue_norm

__all__ = ["HelmholtzResult", "helmholtz", "helmholtz_estimates"]


@dataclass(frozen=True)
class HelmholtzResult:
    bPart: GridField
    aStarPart: GridField
    w: GridField
    reconstructionError: float
    constraintResidual: float
    orthogonalityResidual: float
    potentialResidual: float


def _symbol_stack(sym, f):
    """A(xi) for every grid frequency, shape (nfreq, dimW, dimV)."""
    xis = xi_grids(f)
    flat = np.stack([x.ravel() for x in xis], axis=-1)  # (nfreq, n)
    A = np.zeros((flat.shape[0], sym.dimW, sym.dimV))
    for alpha, mat in sym.coeffs.items():
        mono = np.ones(flat.shape[0])
        for a, col in zip(alpha, flat.T):
            if a:
                mono = mono * col**a
        A += mono[:, None, None] * mat[None, :, :]
    return A, flat


def helmholtz(v, sym, tolSV=sym_mod.DEFAULT_TOL_SV, rank_report=None):
    """Split v into the frequency-kernel part and the A*-range part.

    Requires a certified constant-rank operator (a report may be passed in;
    otherwise a sampling check is run here).
    """
    if v.dimV != sym.dimV:
        raise ValueError("field/operator dimension mismatch")
    report = rank_report or sym_mod.constant_rank_check(sym, samples=200, tolSV=tolSV)
    if not report.is_constant:
        raise ValueError("helmholtz requires a constant-rank operator "
                         f"(witness {report.witness})")
    vhat = fft(v)
    nfreq = int(np.prod(v.shape))
    vflat = vhat.reshape(nfreq, v.dimV)
    A, flat_xi = _symbol_stack(sym, v)
    mag = np.sqrt(np.sum(flat_xi**2, axis=-1))
    nz = mag > 0
    # normalize frequencies (P and the pinv computations are 0-homogeneous in
    # exact arithmetic; normalizing keeps conditioning uniform)
    An = np.array(A)
    An[nz] /= mag[nz, None, None] ** sym.l
    Adag = np.linalg.pinv(An[nz], rcond=tolSV)
    P = np.eye(sym.dimV)[None, :, :] - Adag @ An[nz]
    b_flat = np.array(vflat)
    b_flat[nz] = np.einsum("kij,kj->ki", P, vflat[nz])
    a_flat = vflat - b_flat
    # w from (A A^T)^+ i^l A v^, using the unnormalized symbol
    il = 1j**sym.l
    AAT = A[nz] @ np.transpose(A[nz], (0, 2, 1))
    AATdag = np.linalg.pinv(AAT, rcond=tolSV)
    w_flat = np.zeros((nfreq, sym.dimW), dtype=complex)
    w_flat[nz] = np.einsum("kij,kj->ki", AATdag, il * np.einsum("kij,kj->ki", A[nz], vflat[nz]))
    bPart = ifft(b_flat.reshape(vhat.shape), v.period)
    aStarPart = ifft(a_flat.reshape(v.shape + (v.dimV,)), v.period)
    w = ifft(w_flat.reshape(v.shape + (sym.dimW,)), v.period)

    scale = lebesgue_norm(v, 2) + 1e-300
    recon = np.sqrt(np.sum((bPart.values + aStarPart.values - v.values) ** 2)
                    * v.cell_volume) / scale
    Ab = apply_symbol(sym, bPart)
    sym_scale = max(float(np.max(np.abs(m))) for m in sym.coeffs.values())
    kmax = max(np.pi * s / p for s, p in zip(v.shape, v.period))
    constraint = lebesgue_norm(Ab, 2) / (sym_scale * kmax**sym.l * scale)
    Astar_w = apply_symbol(sym_mod.adjoint_symbol(sym), w)
    potential = np.sqrt(np.sum((Astar_w.values - aStarPart.values) ** 2)
                        * v.cell_volume) / scale
    ortho = abs(float(np.sum(bPart.values * aStarPart.values) * v.cell_volume)) / scale**2
    return HelmholtzResult(bPart=bPart, aStarPart=aStarPart, w=w,
                           reconstructionError=float(recon),
                           constraintResidual=float(constraint),
                           orthogonalityResidual=float(ortho),
                           potentialResidual=float(potential))


def helmholtz_estimates(v, sym, innerB="lebesgue:p=2", innerW="lebesgue:p=2",
                        result=None):
    """Measured ratios behind the decomposition estimates.

    Returns {"ratioB": ||bPart||/||v||, "ratioW": ||aStarPart|| /
    ||Av||_{W^{-l}, inner}}; ratios are reported, never asserted against
    non-explicit constants.  A-free inputs make the second ratio 0/0 and it
    is reported as None ("not applicable").
    """
    res = result or helmholtz(v, sym)
    denomB = evaluate_norm(v, innerB)
    ratioB = evaluate_norm(res.bPart, innerB) / denomB if denomB > 0 else None
    Av = apply_symbol(sym, v)
    scale = lebesgue_norm(v, 2) + 1e-300
    if lebesgue_norm(Av, 2) <= 1e-12 * scale:
        ratioW = None
    else:
        denomW = neg_sobolev_norm(Av, sym.l, innerW, strict=False)
        numW = evaluate_norm(res.aStarPart, innerW)
        ratioW = numW / denomW if denomW > 0 else None
    return {"ratioB": ratioB, "ratioW": ratioW, "result": res}
