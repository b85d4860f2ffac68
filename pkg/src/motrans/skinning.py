"""Skinning-weight model and the linear-blend-skinning deformer.

Weights live on the probability simplex: every vertex row is non-negative
and sums to 1. A "part" is an implicit deformation primitive indexed
0..K-1; the argmax over a row assigns the vertex to a part.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import kernels, quat
from .errors import ContractError, DegenerateRowError, FormatError
from .mesh import Mesh

SIMPLEX_TOL = 1e-6
DEFAULT_PART_COUNT = 40

# Informal label -> body part naming observed on rigged humanoids; a
# documentation aid, not a contract.
DEFAULT_LABEL_NAMES = {
    0: "left forearm",
    3: "left leg",
    9: "right palm",
    16: "left sole",
    21: "chest",
    25: "left palm",
    31: "right upper arm",
    32: "right forearm",
    33: "lower abdomen",
    35: "head",
}


@dataclass(frozen=True)
class SkinningWeights:
    """V x K weight matrix, one simplex-constrained row per vertex."""

    weights: np.ndarray

    def __post_init__(self):
        w = np.ascontiguousarray(np.asarray(self.weights, dtype=np.float64))
        if w.ndim != 2:
            raise ContractError(f"weights must be a 2-D matrix, got shape {w.shape}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def vertex_count(self) -> int:
        return self.weights.shape[0]

    @property
    def part_count(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class PartTransformSet:
    """Per-part rigid transforms for one frame: K unit quaternions + translations."""

    rotations: np.ndarray    # (K, 4) scalar-first quaternions
    translations: np.ndarray  # (K, 3)
    frame_index: int = 0

    def __post_init__(self):
        r = np.ascontiguousarray(np.asarray(self.rotations, dtype=np.float64))
        t = np.ascontiguousarray(np.asarray(self.translations, dtype=np.float64))
        if r.ndim != 2 or r.shape[1] != 4 or t.shape != (r.shape[0], 3):
            raise ContractError(
                f"expected (K,4) rotations and (K,3) translations, got {r.shape}, {t.shape}"
            )
        norms = np.linalg.norm(r, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise ContractError("rotation quaternions must be unit length (tol 1e-9)")
        if self.frame_index < 0:
            raise ContractError("frame_index must be >= 0")
        r.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotations", r)
        object.__setattr__(self, "translations", t)

    @property
    def part_count(self) -> int:
        return self.rotations.shape[0]

    @classmethod
    def identity(cls, part_count: int, frame_index: int = 0) -> "PartTransformSet":
        rots = np.tile(quat.IDENTITY, (part_count, 1))
        return cls(rotations=rots, translations=np.zeros((part_count, 3)),
                   frame_index=frame_index)


@dataclass(frozen=True)
class WeightViolation:
    row: int
    kind: str      # "l1" or "range"
    detail: str


def validate_weights(weights: SkinningWeights, tol: float = SIMPLEX_TOL) -> list[WeightViolation]:
    """Report every row violating non-negativity, the [0,1] range, or L1=1.

    An empty report means the matrix is valid.
    """
    w = weights.weights
    report = []
    sums = w.sum(axis=1)
    bad_sum = np.abs(sums - 1.0) > tol
    bad_range = (w < -tol).any(axis=1) | (w > 1.0 + tol).any(axis=1)
    for row in np.nonzero(bad_range)[0]:
        report.append(WeightViolation(int(row), "range",
                                      f"entries outside [0,1]: {w[row].min():.6g}..{w[row].max():.6g}"))
    for row in np.nonzero(bad_sum)[0]:
        report.append(WeightViolation(int(row), "l1", f"row sums to {sums[row]:.6g}"))
    report.sort(key=lambda v: (v.row, v.kind))
    return report


def argmax_label(weights: SkinningWeights, vertex: int) -> int:
    """Part label of one vertex; ties break to the lowest index."""
    if not 0 <= vertex < weights.vertex_count:
        raise ContractError(f"vertex {vertex} out of range [0, {weights.vertex_count})")
    return int(np.argmax(weights.weights[vertex]))


def argmax_labels(weights: SkinningWeights) -> np.ndarray:
    """Vector of argmax labels for all vertices (lowest index wins ties)."""
    return np.argmax(weights.weights, axis=1)


def part_vertex_sets(weights: SkinningWeights) -> dict[int, list[int]]:
    """Partition vertices by argmax label; parts absent from the map are uncovered."""
    labels = argmax_labels(weights)
    sets: dict[int, list[int]] = {}
    for v, k in enumerate(labels):
        sets.setdefault(int(k), []).append(v)
    return sets


def lbs_deform(mesh: Mesh, weights: SkinningWeights, transforms: PartTransformSet) -> Mesh:
    """Articulate a mesh: y_v = sum_k W[v,k] (R_k x_v + t_k). Connectivity unchanged."""
    if weights.vertex_count != mesh.vertex_count:
        raise ContractError(
            f"weights bound to {weights.vertex_count} vertices, mesh has {mesh.vertex_count}"
        )
    if transforms.part_count != weights.part_count:
        raise ContractError(
            f"transform set has {transforms.part_count} parts, weights have {weights.part_count}"
        )
    rot_mats = quat.to_matrix(transforms.rotations)
    out = kernels.lbs_blend(mesh.vertices, weights.weights, rot_mats, transforms.translations)
    return mesh.with_vertices(out)


def renormalize(weights: SkinningWeights) -> SkinningWeights:
    """Divide every row by its L1 norm; raises on zero rows."""
    w = weights.weights
    sums = np.abs(w).sum(axis=1)
    zero = np.nonzero(sums == 0)[0]
    if zero.size:
        raise DegenerateRowError(int(zero[0]))
    return SkinningWeights(weights=w / sums[:, None])


# --- JSON wire format --------------------------------------------------------

def weights_to_json(weights: SkinningWeights) -> str:
    """Serialize as {"part_count": K, "weights": [rows]}, rows L1-normalized."""
    w = renormalize(weights).weights
    return json.dumps({"part_count": weights.part_count, "weights": w.tolist()})


def weights_from_json(text) -> SkinningWeights:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"weights JSON malformed: {e}") from None
    if not isinstance(doc, dict) or "weights" not in doc or "part_count" not in doc:
        raise FormatError('weights JSON needs "part_count" and "weights" keys')
    try:
        w = np.array(doc["weights"], dtype=np.float64)
    except (ValueError, TypeError) as e:
        raise FormatError(f"weights matrix malformed: {e}") from None
    if w.ndim != 2 or w.shape[1] != int(doc["part_count"]):
        raise FormatError(
            f"weights shape {w.shape} does not match part_count {doc['part_count']}"
        )
    return SkinningWeights(weights=w)
