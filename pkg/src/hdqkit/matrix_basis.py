"""Laguerre matrix basis for one symplectic pair.

The functions b_mn diagonalize the star product: b_mn * b_kl = d_nk b_ml,
so coefficient matrices multiply like ordinary matrices.  For n >= m,

    b_mn = 2 (-1)^m sqrt(m!/n!) (sqrt(2/theta) (q - i p))^{n-m}
           L_m^{(n-m)}(2 r^2 / theta) exp(-r^2 / theta),

and b_mn = conj(b_nm) below the diagonal.  The conjugate variable q - i p
in the raising direction is forced by the star-product kernel orientation:
(q - i p) * b_00 = 0, so q - i p plays the annihilator role and b_mn acts
like |m><n|.  Normalization: <b_mn, b_kl> = 2 pi theta d_mk d_nl and the
integral of b_mm is 2 pi theta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .errors import NotSquareIntegrable, SpecMismatch, TruncationError
from .moyal import GridFunction, GridSpec

_TRUNC_CAP = 16


@dataclass
class MatrixSymbol:
    """Coefficients f_mn of a symbol in the matrix basis."""

    trunc: int
    theta: float
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.trunc, self.trunc):
            raise SpecMismatch(
                f"coefficient matrix must be {self.trunc} x {self.trunc}")

    @property
    def norm(self) -> float:
        """L^2 norm via Parseval: 2 pi theta sum |f_mn|^2."""
        return float(np.sqrt(2.0 * np.pi * self.theta) * np.linalg.norm(self.coeffs))

    def __add__(self, other: "MatrixSymbol") -> "MatrixSymbol":
        _compatible(self, other)
        return MatrixSymbol(self.trunc, self.theta, self.coeffs + other.coeffs)

    def __sub__(self, other: "MatrixSymbol") -> "MatrixSymbol":
        _compatible(self, other)
        return MatrixSymbol(self.trunc, self.theta, self.coeffs - other.coeffs)

    def __rmul__(self, scalar: complex) -> "MatrixSymbol":
        return MatrixSymbol(self.trunc, self.theta, scalar * self.coeffs)


def _compatible(a: MatrixSymbol, b: MatrixSymbol) -> None:
    if a.trunc != b.trunc or a.theta != b.theta:
        raise SpecMismatch("matrix symbols disagree on truncation or theta")


@dataclass
class BasisCache:
    """Sampled b_mn for m, n < trunc on one grid, built once and reused."""

    spec: GridSpec
    trunc: int
    table: np.ndarray  # (trunc, trunc, M, M)

    def function(self, m: int, n: int) -> GridFunction:
        return GridFunction(self.spec, self.table[m, n])


def synthesize_basis(spec: GridSpec, trunc: int, cap: int = _TRUNC_CAP) -> BasisCache:
    """Evaluate the closed-form basis on the grid for all m, n < trunc."""
    if spec.n != 1:
        raise SpecMismatch("the matrix basis is a one-pair construction")
    if trunc < 1:
        raise SpecMismatch("truncation must be at least 1")
    if trunc > cap:
        raise TruncationError(
            f"truncation {trunc} above the cap {cap}; Laguerre growth untested there")
    th = spec.theta
    q = spec.axis(0)[:, None]
    p = spec.axis(1)[None, :]
    z = np.sqrt(2.0 / th) * (q - 1j * p)
    r2 = q * q + p * p
    gauss = np.exp(-r2 / th)
    arg = 2.0 * r2 / th
    table = np.empty((trunc, trunc, spec.M, spec.M), dtype=complex)
    for m in range(trunc):
        for n in range(m, trunc):
            amp = 2.0 * (-1.0) ** m * np.exp(0.5 * (gammaln(m + 1) - gammaln(n + 1)))
            val = amp * z ** (n - m) * eval_genlaguerre(m, n - m, arg) * gauss
            if not np.all(np.isfinite(val.view(float))):
                raise TruncationError(f"b_{m}{n} overflowed on the grid")
            table[m, n] = val
            if n > m:
                table[n, m] = np.conj(val)
    return BasisCache(spec, trunc, table)


def transform(obj: GridFunction | MatrixSymbol, cache: BasisCache,
              direction: str | None = None) -> MatrixSymbol | GridFunction:
    """Coefficients from samples (forward) or samples from coefficients.

    forward:  f_mn = (2 pi theta)^{-1} integral f b_nm
    backward: f = sum f_mn b_mn
    The direction is inferred from the input type; pass it only to assert.
    """
    inferred = "forward" if isinstance(obj, GridFunction) else "backward"
    if direction is not None and direction != inferred:
        raise SpecMismatch(f"direction {direction!r} does not fit a {type(obj).__name__}")
    if inferred == "forward":
        if obj.spec != cache.spec:
            raise SpecMismatch("grid function and cache disagree on the grid")
        th = cache.spec.theta
        weight = cache.spec.cell / (2.0 * np.pi * th)
        # f_mn pairs against b_nm: swap the first two table axes
        coeffs = weight * np.einsum("nmqp,qp->mn", cache.table, obj.samples,
                                    optimize=True)
        return MatrixSymbol(cache.trunc, th, coeffs)
    if obj.trunc != cache.trunc or obj.theta != cache.spec.theta:
        raise SpecMismatch("symbol and cache disagree on truncation or theta")
    samples = np.einsum("mn,mnqp->qp", obj.coeffs, cache.table, optimize=True)
    return GridFunction(cache.spec, samples)


def matrix_product_oracle(f: MatrixSymbol, g: MatrixSymbol) -> MatrixSymbol:
    """Star product in coefficients: the plain matrix product."""
    _compatible(f, g)
    return MatrixSymbol(f.trunc, f.theta, f.coeffs @ g.coeffs)


def basis_unit(trunc: int, theta: float, m: int, n: int) -> MatrixSymbol:
    """The symbol of b_mn itself: a single unit coefficient."""
    coeffs = np.zeros((trunc, trunc), dtype=complex)
    coeffs[m, n] = 1.0
    return MatrixSymbol(trunc, theta, coeffs)


def matrix_unit(trunc: int, theta: float) -> MatrixSymbol:
    """Unit of the truncated matrix model (identity coefficients)."""
    return MatrixSymbol(trunc, theta, np.eye(trunc, dtype=complex))


def synthesize_unit(cache: BasisCache) -> GridFunction:
    """Refused: the unit sum_m b_mm is a multiplier, not an L^2 element."""
    raise NotSquareIntegrable(
        "the unit symbol has no square-integrable representative; "
        "keep it at the matrix level via matrix_unit")


def ladder_matrix(which: int, trunc: int) -> np.ndarray:
    """Coefficient matrices of the coordinate symbols z1, z2.

    (Z1)_mn = i sqrt(m) d_{m,n+1} and (Z2)_mn = -i sqrt(m+1) d_{m+1,n}.
    """
    m = np.arange(trunc)
    z = np.zeros((trunc, trunc), dtype=complex)
    if which == 1:
        z[m[1:], m[1:] - 1] = 1j * np.sqrt(m[1:])
    elif which == 2:
        z[m[:-1], m[:-1] + 1] = -1j * np.sqrt(m[:-1] + 1)
    else:
        raise SpecMismatch("ladder index must be 1 or 2")
    return z


def gbv_norm(sym: MatrixSymbol, k: int, l: int, mode: str = "usual") -> float:
    """Weighted coefficient norm (sum m^k n^l |f_mn|^2)^{1/2}, 0^0 := 1.

    mode="usual" applies the weights directly; mode="operator" realizes the
    same number through ladder-matrix words (alternating adjoint/plain
    letters, k on the left and l on the right), which is the generator-word
    form of the norm.
    """
    if k < 0 or l < 0:
        raise SpecMismatch("weights need nonnegative exponents")
    if mode == "usual":
        idx = np.arange(sym.trunc, dtype=float)
        wm = idx ** k if k else np.ones_like(idx)
        wn = idx ** l if l else np.ones_like(idx)
        return float(np.sqrt(np.sum(wm[:, None] * wn[None, :]
                                    * np.abs(sym.coeffs) ** 2)))
    if mode != "operator":
        raise SpecMismatch(f"unknown gbv mode {mode!r}")
    z1 = ladder_matrix(1, sym.trunc)
    z2 = ladder_matrix(2, sym.trunc)
    acc = sym.coeffs.copy()
    # left word: Z1^+ Z1 Z1^+ ... (k letters) gives row weights m^k
    for i in range(k):
        acc = (z1.conj().T if i % 2 == 0 else z1) @ acc
    # right word: ... Z2 Z2^+ with Z2^+ applied first gives column weights n^l
    for i in range(l):
        acc = acc @ (z2.conj().T if i % 2 == 0 else z2)
    return float(np.linalg.norm(acc))


def matrix_star_exp(f: MatrixSymbol, s: complex = 1.0) -> MatrixSymbol:
    """Star-exponential exp(s f) on the matrix model."""
    return MatrixSymbol(f.trunc, f.theta, expm(s * f.coeffs))


def split_unital(sym: MatrixSymbol) -> tuple[complex, MatrixSymbol]:
    """Write sym = c 1 + rest with c read off the deepest diagonal entry.

    Meaningful when the non-unital part is supported strictly inside the
    truncation, as for star-exponentials of low-index symbols.
    """
    c = complex(sym.coeffs[-1, -1])
    return c, MatrixSymbol(sym.trunc, sym.theta,
                           sym.coeffs - c * np.eye(sym.trunc))
