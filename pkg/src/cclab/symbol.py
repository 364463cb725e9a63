"""Symbols of l-homogeneous constant-coefficient operators.

An operator A = sum_{|alpha|=l} A_alpha d^alpha is represented by its
coefficient matrices.  The symbol A(xi) = sum A_alpha xi^alpha is an exact
polynomial; rank structure (constant rank, wave cone) is certified by sampling
the unit sphere, and the frequency-wise projection P(xi) onto ker A(xi) is
what the Helmholtz decomposition consumes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MultiIndex",
    "OperatorSymbol",
    "RankReport",
    "WaveConeSample",
    "evaluate",
    "constant_rank_check",
    "wave_cone_span",
    "kernel_projection",
    "adjoint_symbol",
    "unit_sphere_points",
    "make_operator",
    "operator_to_json",
    "operator_from_json",
    "NAMED_OPERATORS",
]

DEFAULT_TOL_SV = 1e-8

MultiIndex = tuple  # tuple of n nonnegative ints; order = sum(entries)


def _check_multi_index(alpha, n, l):
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != n:
        raise ValueError(f"multi-index {alpha} has length {len(alpha)}, expected n={n}")
    if any(a < 0 for a in alpha):
        raise ValueError(f"multi-index {alpha} has negative entries")
    if sum(alpha) != l:
        raise ValueError(f"multi-index {alpha} has order {sum(alpha)}, expected l={l}")
    return alpha


@dataclass(frozen=True)
class OperatorSymbol:
    """A = sum_{|alpha|=l} A_alpha d^alpha with dimW x dimV coefficient matrices."""

    n: int
    l: int
    dimV: int
    dimW: int
    coeffs: dict = field(default_factory=dict)  # MultiIndex -> (dimW, dimV) array
    name: str = ""

    def __post_init__(self):
        if self.n < 1 or self.l < 1 or self.dimV < 1 or self.dimW < 1:
            raise ValueError("n, l, dimV, dimW must be positive")
        clean = {}
        any_nonzero = False
        for alpha, mat in self.coeffs.items():
            alpha = _check_multi_index(alpha, self.n, self.l)
            mat = np.asarray(mat, dtype=float)
            if mat.shape != (self.dimW, self.dimV):
                raise ValueError(
                    f"coefficient for {alpha} has shape {mat.shape}, "
                    f"expected ({self.dimW}, {self.dimV})"
                )
            clean[alpha] = mat
            any_nonzero = any_nonzero or np.any(mat != 0.0)
        if not any_nonzero:
            raise ValueError("operator must have at least one nonzero coefficient")
        object.__setattr__(self, "coeffs", clean)


@dataclass(frozen=True)
class RankReport:
    rank: object  # int, or the string "non-constant"
    witness: object  # unit frequency where the rank deviates, or None
    samples: int
    tolSV: float

    @property
    def is_constant(self):
        return isinstance(self.rank, (int, np.integer))


@dataclass(frozen=True)
class WaveConeSample:
    directions: list  # list of (xi, kernel-basis matrix with columns in ker A(xi))
    spanRank: int
    dimV: int

    @property
    def spanning(self):
        return self.spanRank == self.dimV


def evaluate(sym, xi):
    """Exact polynomial evaluation A(xi) = sum A_alpha xi^alpha.

    Accepts real or complex xi of length sym.n.
    """
    xi = np.asarray(xi)
    if xi.shape != (sym.n,):
        raise ValueError(f"frequency has shape {xi.shape}, expected ({sym.n},)")
    out = np.zeros((sym.dimW, sym.dimV), dtype=xi.dtype if xi.dtype.kind == "c" else float)
    for alpha, mat in sym.coeffs.items():
        mono = 1.0
        for a, x in zip(alpha, xi):
            if a:
                mono = mono * x**a
        out = out + mono * mat
    return out


def unit_sphere_points(n, count):
    """Deterministic low-discrepancy points on the unit sphere in R^n.

    n=1: the two signs; n=2: golden-angle sequence on the circle;
    n=3: Fibonacci sphere lattice; n>=4: tensorized angle grid.
    """
    if count < 1:
        raise ValueError("need at least one sample point")
    if n == 1:
        return [np.array([1.0]), np.array([-1.0])][: max(count, 1)] if count >= 2 else [np.array([1.0])]
    if n == 2:
        golden = (1.0 + math.sqrt(5.0)) / 2.0
        return [
            np.array([math.cos(2 * math.pi * k * golden), math.sin(2 * math.pi * k * golden)])
            for k in range(count)
        ]
    if n == 3:
        golden = (1.0 + math.sqrt(5.0)) / 2.0
        pts = []
        for k in range(count):
            z = 1.0 - 2.0 * (k + 0.5) / count
            r = math.sqrt(max(0.0, 1.0 - z * z))
            th = 2 * math.pi * k / golden
            pts.append(np.array([r * math.cos(th), r * math.sin(th), z]))
        return pts
    # tensorized angles for n >= 4
    per_axis = max(2, int(round(count ** (1.0 / (n - 1)))))
    grids = np.meshgrid(*[np.linspace(0.1, math.pi - 0.1, per_axis) for _ in range(n - 2)]
                        + [np.linspace(0.1, 2 * math.pi - 0.1, per_axis)], indexing="ij")
    pts = []
    for idx in np.ndindex(*grids[0].shape):
        angles = [g[idx] for g in grids]
        x = np.ones(n)
        for i, th in enumerate(angles):
            x[i] *= math.cos(th)
            x[i + 1 :] *= math.sin(th)
        x /= np.linalg.norm(x)
        pts.append(x)
    return pts[:count] if count < len(pts) else pts


def _numerical_rank(mat, tolSV):
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tolSV * sv[0]))


def constant_rank_check(sym, samples=1000, tolSV=DEFAULT_TOL_SV):
    """Numerical rank of A(xi) over a deterministic sphere sample.

    Certified only up to sampling (the report records the sample count).
    """
    pts = unit_sphere_points(sym.n, samples)
    rank0 = None
    for xi in pts:
        r = _numerical_rank(evaluate(sym, xi), tolSV)
        if rank0 is None:
            rank0 = r
        elif r != rank0:
            return RankReport(rank="non-constant", witness=xi, samples=len(pts), tolSV=tolSV)
    return RankReport(rank=rank0, witness=None, samples=len(pts), tolSV=tolSV)


def kernel_projection(sym, xi, tolSV=DEFAULT_TOL_SV):
    """Orthogonal projection P(xi) = I - pinv(A(xi)) A(xi) onto ker A(xi).

    Zero-homogeneous in xi; xi = 0 is an error (callers assign the zero mode
    to the kernel part by convention, i.e. P(0) := identity).
    """
    xi = np.asarray(xi, dtype=float)
    if not np.any(xi):
        raise ValueError("kernel_projection is undefined at xi = 0; handle the mean separately")
    A = evaluate(sym, xi / np.linalg.norm(xi))
    sv_max = np.linalg.svd(A, compute_uv=False)[0] if min(A.shape) else 0.0
    if sv_max == 0.0:
        return np.eye(sym.dimV)
    Adag = np.linalg.pinv(A, rcond=tolSV)
    return np.eye(sym.dimV) - Adag @ A


def wave_cone_span(sym, samples=100, tolSV=DEFAULT_TOL_SV):
    """Kernel bases of A(xi) over sampled directions and the rank of their span."""
    pts = unit_sphere_points(sym.n, samples)
    directions = []
    stacked = []
    for xi in pts:
        A = evaluate(sym, xi)
        u, sv, vt = np.linalg.svd(A)
        sv_max = sv[0] if sv.size else 0.0
        ker_dim = sym.dimV - (int(np.sum(sv > tolSV * sv_max)) if sv_max > 0 else 0)
        if ker_dim > 0:
            basis = vt[sym.dimV - ker_dim :].T  # columns span ker A(xi)
            directions.append((xi, basis))
            stacked.append(basis.T)
    if stacked:
        span_rank = _numerical_rank(np.vstack(stacked), tolSV)
    else:
        span_rank = 0
    return WaveConeSample(directions=directions, spanRank=span_rank, dimV=sym.dimV)


def adjoint_symbol(sym):
    """Formal adjoint A* = sum (-1)^l A_alpha^T d^alpha.

    With the i^l factor kept inside frequency-side evaluation (see
    field.apply_symbol), the composed frequency-side identity
    A(xi) A*(xi) = A(xi) A(xi)^T holds.
    """
    sign = (-1.0) ** sym.l
    coeffs = {alpha: sign * mat.T for alpha, mat in sym.coeffs.items()}
    return OperatorSymbol(
        n=sym.n, l=sym.l, dimV=sym.dimW, dimW=sym.dimV, coeffs=coeffs,
        name=(sym.name + "*") if sym.name else "",
    )


# ---------------------------------------------------------------------------
# named operators and serialization
# ---------------------------------------------------------------------------

def _e(n, i):
    alpha = [0] * n
    alpha[i] = 1
    return tuple(alpha)


def _div(n):
    # A(v) = sum_i d_i v_i, V = R^n, W = R
    coeffs = {}
    for i in range(n):
        m = np.zeros((1, n))
        m[0, i] = 1.0
        coeffs[_e(n, i)] = m
    return OperatorSymbol(n=n, l=1, dimV=n, dimW=1, coeffs=coeffs, name=f"div{n}")


def _curl2():
    # A(v) = d1 v2 - d2 v1 on planar vector fields
    return OperatorSymbol(
        n=2, l=1, dimV=2, dimW=1,
        coeffs={(1, 0): np.array([[0.0, 1.0]]), (0, 1): np.array([[-1.0, 0.0]])},
        name="curl2",
    )


def _divcurl2():
    # A(v, vt) = (div v, curl vt) on R^4 = (v1, v2, vt1, vt2)
    c = {
        (1, 0): np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]]),
        (0, 1): np.array([[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, -1.0, 0.0]]),
    }
    return OperatorSymbol(n=2, l=1, dimV=4, dimW=2, coeffs=c, name="divcurl2")


def _grad(n):
    coeffs = {}
    for i in range(n):
        m = np.zeros((n, 1))
        m[i, 0] = 1.0
        coeffs[_e(n, i)] = m
    return OperatorSymbol(n=n, l=1, dimV=1, dimW=n, coeffs=coeffs, name=f"grad(n={n})")


def _curl_matrix(n):
    """Row-wise curl on n x n matrix fields (row-major flattening).

    ker A(xi) = {a (x) xi}: exactly the gradients among matrix fields.
    """
    rows = [(i, j) for i in range(n) for j in range(i + 1, n)]  # curl index pairs
    dimV = n * n
    dimW = n * len(rows)
    coeffs = {}
    for ax in range(n):
        m = np.zeros((dimW, dimV))
        w = 0
        for r in range(n):  # matrix row
            for (i, j) in rows:
                # (curl of row r)_{ij} = d_i V_{rj} - d_j V_{ri}
                if ax == i:
                    m[w, r * n + j] += 1.0
                if ax == j:
                    m[w, r * n + i] -= 1.0
                w += 1
        if np.any(m):
            coeffs[_e(n, ax)] = m
    return OperatorSymbol(n=n, l=1, dimV=dimV, dimW=dimW, coeffs=coeffs,
                          name=f"curl_matrix_n(n={n})")


NAMED_OPERATORS = {
    "div2": lambda n=2: _div(int(n)),
    "curl2": lambda n=2: _curl2(),
    "divcurl2": lambda n=2: _divcurl2(),
    "grad": lambda n=2: _grad(int(n)),
    "curl_matrix_n": lambda n=2: _curl_matrix(int(n)),
}


def make_operator(spec):
    """Build a named operator from a string like "divcurl2" or "grad:n=3"."""
    if isinstance(spec, OperatorSymbol):
        return spec
    name, _, rest = spec.partition(":")
    name = name.strip()
    if name not in NAMED_OPERATORS:
        close = sorted(NAMED_OPERATORS, key=lambda k: _name_distance(name, k))[0]
        raise KeyError(f"unknown operator {name!r}; did you mean {close!r}?")
    kwargs = {}
    if rest:
        for part in rest.split(","):
            k, _, v = part.partition("=")
            kwargs[k.strip()] = float(v) if "." in v else int(v)
    return NAMED_OPERATORS[name](**kwargs)


def _name_distance(a, b):
    # tiny edit-distance-ish score for suggestions
    return abs(len(a) - len(b)) + sum(ca != cb for ca, cb in zip(a, b))


def operator_to_json(sym):
    return json.dumps({
        "n": sym.n, "l": sym.l, "dimV": sym.dimV, "dimW": sym.dimW,
        "coeffs": [
            {"alpha": list(alpha), "matrix": mat.tolist()}
            for alpha, mat in sorted(sym.coeffs.items())
        ],
    })


def operator_from_json(text):
    doc = json.loads(text)
    coeffs = {tuple(c["alpha"]): np.array(c["matrix"], dtype=float) for c in doc["coeffs"]}
    return OperatorSymbol(n=doc["n"], l=doc["l"], dimV=doc["dimV"], dimW=doc["dimW"],
                          coeffs=coeffs)
