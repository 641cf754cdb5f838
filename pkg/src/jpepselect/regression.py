"""Linear-algebra substrate: datasets, model specs, and least-squares fits.

Models are subsets of candidate covariates; the intercept is implicit and
always present, so a model with k covariates has design dimension d = k + 1.
Residual sums of squares come from an orthogonal (QR) decomposition, never
from normal equations.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    InsufficientDataError,
    InvalidModelError,
    ParseError,
    SingularDesignError,
)

__all__ = [
    "Dataset",
    "ModelSpec",
    "ModelFit",
    "RankReport",
    "build_design",
    "fit_rss",
    "rank_check",
    "load_csv",
]

# Relative cutoff on QR diagonal magnitudes for numerical rank decisions.
RANK_RTOL = 1e-10


@dataclass(frozen=True)
class Dataset:
    """Response vector plus candidate covariate matrix.

    Parameters
    ----------
    y : ndarray
        Response, shape (n,).
    X : ndarray
        Candidate covariates, shape (n, p). The intercept column is NOT
        stored; it is implicit in every model.
    names : tuple of str
        Covariate labels, length p.
    """

    y: np.ndarray
    X: np.ndarray
    names: tuple

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        X = np.asarray(self.X, dtype=float)
        if X.ndim != 2:
            raise InvalidModelError("X must be a 2-d matrix")
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise InvalidModelError("y length must match rows of X")
        if y.shape[0] < 1:
            raise InvalidModelError("need at least one observation")
        if not np.all(np.isfinite(y)) or not np.all(np.isfinite(X)):
            raise InvalidModelError("non-finite values in data")
        # constant columns collide with the implicit intercept
        if X.shape[1] > 0:
            spans = X.max(axis=0) - X.min(axis=0)
            bad = np.nonzero(spans == 0.0)[0]
            if bad.size:
                raise InvalidModelError(
                    f"covariate column(s) {[int(b) + 1 for b in bad]} are constant; "
                    "the intercept is implicit"
                )
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != X.shape[1]:
            raise InvalidModelError("names length must match columns of X")

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True, order=True)
class ModelSpec:
    """A subset of covariates identified by 1-based indices.

    The intercept is always included and is not listed. The empty subset is
    the reference (intercept-only) model M0.
    """

    included: tuple = field(default=())

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.included)))
        if any(i < 1 for i in idx):
            raise InvalidModelError("covariate indices are 1-based")
        object.__setattr__(self, "included", idx)

    @property
    def dim(self) -> int:
        """Design dimension d: covariate count plus the intercept."""
        return len(self.included) + 1

    def contains(self, j: int) -> bool:
        return j in self.included

    def bitmask(self) -> int:
        m = 0
        for j in self.included:
            m |= 1 << (j - 1)
        return m

    def __str__(self):
        inner = ",".join(str(j) for j in self.included)
        return "{" + inner + "}"


@dataclass(frozen=True)
class ModelFit:
    """Sufficient statistics of a fitted model: (n, d, rss)."""

    n: int
    d: int
    rss: float

    def __post_init__(self):
        if self.d > self.n:
            raise InsufficientDataError(f"d={self.d} exceeds n={self.n}")
        if self.rss < 0:
            raise InvalidModelError("rss must be nonnegative")


@dataclass(frozen=True)
class RankReport:
    """Outcome of a numerical rank check."""

    full_rank: bool
    deficient_columns: tuple = ()


def build_design(dataset: Dataset, model: ModelSpec) -> np.ndarray:
    """Assemble the n x d design matrix for a model.

    Column 1 is the all-ones intercept; the selected covariates follow in
    ascending index order.

    Raises
    ------
    InvalidModelError
        If the model references an index beyond dataset.p.
    """
    if model.included and model.included[-1] > dataset.p:
        raise InvalidModelError(
            f"model {model} references covariate {model.included[-1]} "
            f"but dataset has p={dataset.p}"
        )
    cols = [np.ones(dataset.n)]
    for j in model.included:
        cols.append(dataset.X[:, j - 1])
    return np.column_stack(cols)


def rank_check(matrix: np.ndarray) -> RankReport:
    """Report the numerical rank of a matrix via pivoted QR.

    The matrix is full rank when every diagonal magnitude of R exceeds
    RANK_RTOL times the largest one. Deficient columns are reported in the
    original column numbering (1-based).
    """
    a = np.asarray(matrix, dtype=float)
    if a.size == 0 or a.shape[0] < a.shape[1]:
        return RankReport(False, tuple(range(1, a.shape[1] + 1)))
    r, piv = scipy.linalg.qr(a, mode="r", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag[0] == 0.0:
        return RankReport(False, tuple(int(j) + 1 for j in sorted(piv)))
    small = diag < RANK_RTOL * diag[0]
    if not small.any():
        return RankReport(True)
    bad = sorted(int(piv[k]) + 1 for k in np.nonzero(small)[0])
    return RankReport(False, tuple(bad))


def fit_rss(dataset: Dataset, model: ModelSpec) -> ModelFit:
    """Fit a model by QR and return its residual sum of squares.

    Raises
    ------
    InsufficientDataError
        If n < d.
    SingularDesignError
        If the design is rank deficient at working tolerance.
    """
    Xm = build_design(dataset, model)
    n, d = Xm.shape
    if n < d:
        raise InsufficientDataError(f"n={n} < d={d} for model {model}")
    report = rank_check(Xm)
    if not report.full_rank:
        raise SingularDesignError(
            f"design for model {model} is rank deficient "
            f"(columns {list(report.deficient_columns)})",
            columns=report.deficient_columns,
        )
    q, _ = np.linalg.qr(Xm)
    resid = dataset.y - q @ (q.T @ dataset.y)
    rss = float(resid @ resid)
    if rss < 0.0:
        rss = 0.0
    return ModelFit(n=n, d=d, rss=rss)


def load_csv(path, response: str) -> Dataset:
    """Read a header-first CSV into a Dataset.

    The named response column becomes y; every other column becomes a
    candidate covariate, in file order. All cells must parse as floats.

    Raises
    ------
    ParseError
        On a missing response column, duplicate headers, ragged rows, or a
        non-numeric cell (the message names the row and column).
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise ParseError(f"{path}: duplicate column names in header")
        if response not in header:
            raise ParseError(
                f"{path}: response column {response!r} not found "
                f"(have {header})"
            )
        ycol = header.index(response)
        rows = []
        for rnum, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ParseError(
                    f"{path}: row {rnum} has {len(row)} cells, expected {len(header)}"
                )
            vals = []
            for cnum, cell in enumerate(row):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: row {rnum}, column {header[cnum]!r}: "
                        f"cannot parse {cell.strip()!r} as a number"
                    ) from None
            rows.append(vals)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=float)
    y = data[:, ycol]
    X = np.delete(data, ycol, axis=1)
    names = tuple(h for i, h in enumerate(header) if i != ycol)
    return Dataset(y=y, X=X, names=names)
