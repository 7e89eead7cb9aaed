"""Dense real-matrix primitives and stability machinery.

Everything downstream (gain estimates, simulation, delay bounds) is built on
the handful of operations in this module: a scaling-and-squaring matrix
exponential, a Kronecker-product Lyapunov solver, a tolerance-aware Cholesky
positive-definiteness probe, and a cyclic Jacobi eigensolver for symmetric
matrices.  Matrices are plain float64 ndarrays throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exceptions import DimensionError, LyapunovSolveError, NotHurwitzError

__all__ = [
    "as_matrix",
    "as_vector",
    "mat_exp",
    "lyapunov_solve",
    "is_hurwitz",
    "symmetric_eigen",
    "spectral_norm",
    "StabilityCertificate",
    "stability_certificate",
    "AssumptionH",
    "StructureFlags",
    "structure_flags",
    "StateSpaceSystem",
]

# Coefficients of the degree-13 diagonal Pade approximant to exp, ordered by
# ascending power, and the largest scaled norm at which it is accurate to
# double precision.
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_PADE13_THETA = 5.371920351148152


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a finite 2-d float64 array."""
    arr = np.array(a, dtype=float)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_vector(v, name: str = "vector") -> np.ndarray:
    """Validate and return ``v`` as a finite 1-d float64 array."""
    arr = np.array(v, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DimensionError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def _expm(m: np.ndarray) -> np.ndarray:
    """exp(m) by scaling and squaring with the degree-13 Pade approximant."""
    n = m.shape[0]
    norm = np.linalg.norm(m, 1)
    if norm == 0.0:
        return np.eye(n)
    squarings = 0
    if norm > _PADE13_THETA:
        squarings = max(0, int(math.ceil(math.log2(norm / _PADE13_THETA))))
        m = m / (2.0**squarings)
    ident = np.eye(n)
    b = _PADE13
    m2 = m @ m
    m4 = m2 @ m2
    m6 = m2 @ m4
    u = m @ (
        m6 @ (b[13] * m6 + b[11] * m4 + b[9] * m2)
        + b[7] * m6
        + b[5] * m4
        + b[3] * m2
        + b[1] * ident
    )
    v = (
        m6 @ (b[12] * m6 + b[10] * m4 + b[8] * m2)
        + b[6] * m6
        + b[4] * m4
        + b[2] * m2
        + b[0] * ident
    )
    result = np.linalg.solve(v - u, v + u)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            result = result @ result
    if not np.all(np.isfinite(result)):
        raise OverflowError("matrix exponential overflowed double precision")
    return result


def mat_exp(a, t: float) -> np.ndarray:
    """Evaluate exp(a * t) for a square matrix ``a`` and time ``t >= 0``.

    Raises OverflowError when the result leaves the representable range
    (possible despite Hurwitz ``a`` for intermediate scalings of huge norm).
    """
    arr = as_matrix(a, "a")
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"a must be square, got shape {arr.shape}")
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    if t < 0:
        raise ValueError("t must be nonnegative")
    return _expm(arr * t)


def lyapunov_solve(a, q) -> np.ndarray:
    """Solve A'P + PA = -Q for symmetric P via Kronecker vectorization.

    The n^2-by-n^2 linear system is singular exactly when A has a pair of
    eigenvalues summing to zero; that case, and any solve whose residual is
    inconsistent with the conditioning of the data, raises LyapunovSolveError.
    """
    a = as_matrix(a, "a")
    q = as_matrix(q, "q")
    n = a.shape[0]
    if a.shape != (n, n) or q.shape != (n, n):
        raise DimensionError("a and q must be square matrices of equal size")
    ident = np.eye(n)
    k = np.kron(ident, a.T) + np.kron(a.T, ident)
    try:
        vec_p = np.linalg.solve(k, -q.reshape(-1, order="F"))
    except np.linalg.LinAlgError as exc:
        raise LyapunovSolveError(f"Lyapunov equation not solvable: {exc}") from exc
    p = vec_p.reshape((n, n), order="F")
    p = 0.5 * (p + p.T)
    residual = np.linalg.norm(a.T @ p + p @ a + q)
    scale = np.linalg.norm(a) * np.linalg.norm(p) + np.linalg.norm(q)
    if not np.isfinite(residual) or residual > 1e-10 * max(scale, 1e-300):
        raise LyapunovSolveError(
            f"Lyapunov solve residual {residual:.3e} exceeds 1e-10 * {scale:.3e}"
        )
    return p


def _cholesky_positive_definite(p: np.ndarray) -> bool:
    """Cholesky factorization probe with a trace-relative pivot floor."""
    n = p.shape[0]
    tol = 1e-12 * max(np.trace(p), 0.0)
    l = np.zeros_like(p)
    for k in range(n):
        d = p[k, k] - l[k, :k] @ l[k, :k]
        if d <= tol:
            return False
        l[k, k] = math.sqrt(d)
        for i in range(k + 1, n):
            l[i, k] = (p[i, k] - l[i, :k] @ l[k, :k]) / l[k, k]
    return True


def is_hurwitz(a) -> bool:
    """Whether every eigenvalue of ``a`` has negative real part.

    Decided without an eigensolver: A is Hurwitz iff A'P + PA = -I admits a
    symmetric positive definite solution P.
    """
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"a must be square, got shape {a.shape}")
    try:
        p = lyapunov_solve(a, np.eye(a.shape[0]))
    except LyapunovSolveError:
        return False
    return _cholesky_positive_definite(p)


def symmetric_eigen(s) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (w, v) with eigenvalues ``w`` ascending and orthonormal columns
    ``v`` such that s = v @ diag(w) @ v.T.  Sweeps run until the off-diagonal
    Frobenius mass falls below 1e-12 relative to the matrix norm.
    """
    s = as_matrix(s, "s")
    n = s.shape[0]
    if s.shape != (n, n):
        raise DimensionError(f"s must be square, got shape {s.shape}")
    if np.max(np.abs(s - s.T)) > 1e-10 * max(1.0, np.max(np.abs(s))):
        raise ValueError("s must be symmetric")
    a = 0.5 * (s + s.T)
    v = np.eye(n)
    norm = max(np.linalg.norm(a), 1e-300)
    for _ in range(60):
        # measure the off-diagonal mass directly: subtracting squared sums
        # cancels catastrophically once the mass drops below sqrt(eps)*norm
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= 1e-12 * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * norm:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                rot_p = c * a[:, p] - sn * a[:, q]
                rot_q = sn * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - sn * a[q, :]
                rot_q = sn * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                rot_p = c * v[:, p] - sn * v[:, q]
                rot_q = sn * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order]


def spectral_norm(m) -> float:
    """Largest singular value of ``m`` (Euclidean norm for vector shapes)."""
    arr = np.asarray(m, dtype=float)
    if arr.ndim <= 1 or 1 in arr.shape:
        return float(np.linalg.norm(arr.reshape(-1)))
    gram = arr.T @ arr if arr.shape[0] >= arr.shape[1] else arr @ arr.T
    w, _ = symmetric_eigen(gram)
    return math.sqrt(max(0.0, float(w[-1])))


@dataclass(frozen=True)
class StabilityCertificate:
    """Decay envelope ||exp(A t)|| <= M exp(-sigma t) from a Lyapunov solution.

    P solves A'P + PA = -I; M = sqrt(lmax(P)/lmin(P)) and
    sigma = 1 / (2 lmax(P)).
    """

    p: np.ndarray
    m: float
    sigma: float

    def __post_init__(self) -> None:
        if self.m < 1.0 - 1e-12:
            raise ValueError(f"certificate constant M={self.m} must be >= 1")
        if self.sigma <= 0.0:
            raise ValueError(f"certificate rate sigma={self.sigma} must be > 0")


def stability_certificate(a) -> StabilityCertificate:
    """Build the Lyapunov decay certificate for a Hurwitz matrix.

    Raises NotHurwitzError when no positive definite Lyapunov solution exists.
    """
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"a must be square, got shape {a.shape}")
    try:
        p = lyapunov_solve(a, np.eye(a.shape[0]))
    except LyapunovSolveError as exc:
        raise NotHurwitzError(f"matrix is not Hurwitz: {exc}") from exc
    if not _cholesky_positive_definite(p):
        raise NotHurwitzError("matrix is not Hurwitz: Lyapunov solution not positive definite")
    w, _ = symmetric_eigen(p)
    lmin, lmax = float(w[0]), float(w[-1])
    if lmin <= 0.0:
        raise NotHurwitzError("matrix is not Hurwitz: Lyapunov solution not positive definite")
    return StabilityCertificate(p=p, m=math.sqrt(lmax / lmin), sigma=1.0 / (2.0 * lmax))


@dataclass(frozen=True)
class AssumptionH:
    """Orthogonal diagonalization A = -Q' diag(lambdas) Q of a symmetric
    negative definite A; lambdas are positive and ascend."""

    q: np.ndarray
    lambdas: np.ndarray


@dataclass(frozen=True)
class StructureFlags:
    """Sign/symmetry structure of a system that certifies exact gain formulas."""

    metzler: bool
    nonnegative_b: bool
    nonnegative_c: bool
    assumption_h: AssumptionH | None


def structure_flags(sys: "StateSpaceSystem", tol: float = 0.0) -> StructureFlags:
    """Detect Metzler/nonnegativity structure and symmetric negative
    definiteness of the state matrix.

    ``tol`` relaxes every sign and symmetry test; the default is an exact
    test.  The assumption_h field is populated only when A is symmetric
    (within tol) with all eigenvalues below -tol.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    a, b, c = sys.a, sys.b, sys.c
    off = a - np.diag(np.diag(a))
    metzler = bool(np.all(off >= -tol))
    nonneg_b = bool(np.all(b >= -tol))
    nonneg_c = bool(np.all(c >= -tol))
    assumption = None
    if np.max(np.abs(a - a.T)) <= tol:
        w, v = symmetric_eigen(0.5 * (a + a.T))
        if np.all(w < -tol):
            # A = v diag(w) v', so with q = v' the lambdas -w are positive.
            order = np.argsort(-w)  # ascending lambdas
            assumption = AssumptionH(q=v[:, order].T.copy(), lambdas=-w[order])
    return StructureFlags(
        metzler=metzler,
        nonnegative_b=nonneg_b,
        nonnegative_c=nonneg_c,
        assumption_h=assumption,
    )


@dataclass(eq=False)
class StateSpaceSystem:
    """Strictly causal LTI system  x' = A x + B u,  y = C x  with Hurwitz A.

    Dimensions: A is n-by-n, B is n-by-m, C is p-by-n.  The constructor
    rejects non-Hurwitz state matrices, so every instance carries a decay
    certificate (computed lazily, cached).
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self) -> None:
        self.a = as_matrix(self.a, "A")
        self.b = as_matrix(self.b, "B")
        self.c = as_matrix(self.c, "C")
        n = self.a.shape[0]
        if self.a.shape != (n, n):
            raise DimensionError(f"A must be square, got shape {self.a.shape}")
        if self.b.shape[0] != n:
            raise DimensionError(
                f"B must have {n} rows to match A, got shape {self.b.shape}"
            )
        if self.c.shape[1] != n:
            raise DimensionError(
                f"C must have {n} columns to match A, got shape {self.c.shape}"
            )
        if not is_hurwitz(self.a):
            raise NotHurwitzError("A is not Hurwitz")
        for arr in (self.a, self.b, self.c):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[1]

    @property
    def p(self) -> int:
        return self.c.shape[0]

    @cached_property
    def certificate(self) -> StabilityCertificate:
        return stability_certificate(self.a)

    def impulse_matrix(self, s: float) -> np.ndarray:
        """C exp(A s) B, the p-by-m response kernel at lag s."""
        return self.c @ mat_exp(self.a, s) @ self.b
