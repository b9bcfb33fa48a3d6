"""Structured linear maps acting on datasets and models.

A morphism is a matrix tagged with the kind of structure it preserves and the
dataset axis it acts on.  Predictor and target morphisms multiply rows from
the right; index morphisms recombine examples from the left.  The kinds form
a small fixed vocabulary:

  finvec      any linear map
  finvec_iso  invertible, condition-bounded
  euc         orthogonal (square, m' m = I)
  euc_mono    inner-product preserving into an equal or higher dimension
  set_iso     permutation
  discrete    identity only
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import ContractViolation, SamplingFailed
from .linalg import (
    SeedState,
    as_matrix,
    condition_estimate,
    numerical_rank,
    qr_thin,
    sample_gaussian,
)
from .regression import LinearModel


class Axis(enum.Enum):
    PREDICTOR = "predictor"
    TARGET = "target"
    INDEX = "index"


class CategoryKind(enum.Enum):
    FINVEC = "finvec"
    FINVEC_ISO = "finvec_iso"
    EUC = "euc"
    EUC_MONO = "euc_mono"
    SET_ISO = "set_iso"
    DISCRETE = "discrete"


SQUARE_KINDS = frozenset(
    {CategoryKind.FINVEC_ISO, CategoryKind.EUC, CategoryKind.SET_ISO, CategoryKind.DISCRETE}
)

DEFAULT_KAPPA_MAX = 1e4
_RESAMPLE_CAP = 100


@dataclass(frozen=True)
class Morphism:
    """A structured map from a source dimension to a target dimension.

    Predictor and target morphisms store a source x target matrix applied by
    right multiplication; index morphisms store a target x source matrix
    applied by left multiplication.  Construction checks shapes and dimension
    rules; the structural constraint itself is checked by
    :func:`verify_morphism` and guaranteed by :func:`sample_morphism`.
    """

    kind: CategoryKind
    axis: Axis
    matrix: np.ndarray
    source_dim: int
    target_dim: int

    def __post_init__(self):
        matrix = as_matrix(self.matrix, "matrix")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        if self.source_dim < 1 or self.target_dim < 1:
            raise ContractViolation(
                f"dimensions must be positive, got {self.source_dim}->{self.target_dim}"
            )
        if self.axis is Axis.INDEX:
            expected = (self.target_dim, self.source_dim)
        else:
            expected = (self.source_dim, self.target_dim)
        if matrix.shape != expected:
            raise ContractViolation(
                f"{self.axis.value} morphism matrix must be {expected}, got {matrix.shape}"
            )
        if self.kind in SQUARE_KINDS and self.source_dim != self.target_dim:
            raise ContractViolation(
                f"{self.kind.value} morphisms are square, got "
                f"{self.source_dim}->{self.target_dim}"
            )
        if self.kind is CategoryKind.EUC_MONO and self.target_dim < self.source_dim:
            raise ContractViolation(
                f"euc_mono needs target_dim >= source_dim, got "
                f"{self.source_dim}->{self.target_dim}"
            )


def sample_morphism(
    kind: CategoryKind,
    axis: Axis,
    source_dim: int,
    target_dim: int,
    seed: SeedState,
    kappa_max: float = DEFAULT_KAPPA_MAX,
) -> Morphism:
    """Draw a morphism of the requested kind, deterministically from the seed.

    finvec draws a Gaussian matrix; finvec_iso rejection-samples Gaussians
    until the condition number is at most ``kappa_max``; euc and euc_mono take
    the orthonormal factor of a Gaussian (thin QR with its sign convention, so
    draws are unique); set_iso permutes; discrete is the identity.
    """
    if source_dim < 1 or target_dim < 1:
        raise ContractViolation(
            f"dimensions must be positive, got {source_dim}->{target_dim}"
        )
    if kind in SQUARE_KINDS and source_dim != target_dim:
        raise ContractViolation(
            f"{kind.value} needs source_dim == target_dim, got "
            f"{source_dim}->{target_dim}"
        )
    if kind is CategoryKind.EUC_MONO and target_dim < source_dim:
        raise ContractViolation(
            f"euc_mono needs target_dim >= source_dim, got {source_dim}->{target_dim}"
        )

    if kind is CategoryKind.DISCRETE:
        m = np.eye(source_dim)
    elif kind is CategoryKind.SET_ISO:
        perm = seed.generator().permutation(source_dim)
        m = np.eye(source_dim)[perm]
    elif kind is CategoryKind.FINVEC:
        if axis is Axis.INDEX:
            m = sample_gaussian(target_dim, source_dim, seed)
        else:
            m = sample_gaussian(source_dim, target_dim, seed)
    elif kind is CategoryKind.FINVEC_ISO:
        if not kappa_max >= 1.0:
            raise ContractViolation(f"kappa_max must be >= 1, got {kappa_max}")
        for attempt in range(_RESAMPLE_CAP):
            m = sample_gaussian(source_dim, source_dim, seed.derive("attempt", attempt))
            if condition_estimate(m) <= kappa_max:
                break
        else:
            raise SamplingFailed(
                f"no draw with condition <= {kappa_max:g} in {_RESAMPLE_CAP} attempts"
            )
    elif kind is CategoryKind.EUC:
        m, _ = qr_thin(sample_gaussian(source_dim, source_dim, seed))
    else:  # EUC_MONO
        frame, _ = qr_thin(sample_gaussian(target_dim, source_dim, seed))
        m = frame if axis is Axis.INDEX else frame.T
    return Morphism(kind=kind, axis=axis, matrix=m, source_dim=source_dim, target_dim=target_dim)


def verify_morphism(morphism: Morphism) -> float:
    """Residual of the structural constraint for the morphism's kind; 0 is exact."""
    m = morphism.matrix
    kind = morphism.kind
    if kind is CategoryKind.FINVEC:
        return 0.0
    if kind is CategoryKind.DISCRETE:
        return float(np.linalg.norm(m - np.eye(morphism.source_dim)))
    if kind is CategoryKind.FINVEC_ISO:
        if numerical_rank(m) < morphism.source_dim:
            return math.inf
        return 0.0
    if kind is CategoryKind.SET_ISO:
        eye = np.eye(morphism.source_dim)
        orthogonality = float(np.linalg.norm(m.T @ m - eye))
        binary = float(np.linalg.norm(m * (m - 1.0)))
        return max(orthogonality, binary)
    # euc and euc_mono: the small Gram matrix must be the identity on the source.
    if morphism.axis is Axis.INDEX:
        gram = m.T @ m
    else:
        gram = m @ m.T
    return float(np.linalg.norm(gram - np.eye(morphism.source_dim)))


def act_on_predictors(d: Dataset, morphism: Morphism) -> Dataset:
    """Transform predictor rows: x -> x @ m, targets untouched."""
    if morphism.axis is not Axis.PREDICTOR:
        raise ContractViolation(f"expected a predictor morphism, got {morphism.axis.value}")
    if morphism.source_dim != d.p:
        raise ContractViolation(
            f"morphism source {morphism.source_dim} != dataset p {d.p}"
        )
    return Dataset(x=d.x @ morphism.matrix, y=d.y)


def act_on_targets(d: Dataset, morphism: Morphism) -> Dataset:
    """Transform target rows: y -> y @ m, predictors untouched."""
    if morphism.axis is not Axis.TARGET:
        raise ContractViolation(f"expected a target morphism, got {morphism.axis.value}")
    if morphism.source_dim != d.q:
        raise ContractViolation(
            f"morphism source {morphism.source_dim} != dataset q {d.q}"
        )
    return Dataset(x=d.x, y=d.y @ morphism.matrix)


def act_on_index(d: Dataset, morphism: Morphism) -> Dataset:
    """Recombine examples: x -> m @ x and y -> m @ y together."""
    if morphism.axis is not Axis.INDEX:
        raise ContractViolation(f"expected an index morphism, got {morphism.axis.value}")
    if morphism.source_dim != d.n_examples:
        raise ContractViolation(
            f"morphism source {morphism.source_dim} != dataset N {d.n_examples}"
        )
    return Dataset(x=morphism.matrix @ d.x, y=morphism.matrix @ d.y)


def model_action_target(model: LinearModel, morphism: Morphism) -> LinearModel:
    """Push a model forward along a target morphism: coef -> coef @ m."""
    if morphism.axis is not Axis.TARGET:
        raise ContractViolation(f"expected a target morphism, got {morphism.axis.value}")
    if morphism.source_dim != model.q:
        raise ContractViolation(
            f"morphism source {morphism.source_dim} != model q {model.q}"
        )
    return LinearModel(model.coef @ morphism.matrix)


def model_precompose_predictor(morphism: Morphism, model: LinearModel) -> LinearModel:
    """Pull a model back along a predictor morphism: coef -> m @ coef.

    The result predicts on the morphism's source coordinates, so the model
    must live on its target coordinates.
    """
    if morphism.axis is not Axis.PREDICTOR:
        raise ContractViolation(f"expected a predictor morphism, got {morphism.axis.value}")
    if morphism.target_dim != model.p:
        raise ContractViolation(
            f"morphism target {morphism.target_dim} != model p {model.p}"
        )
    return LinearModel(morphism.matrix @ model.coef)
