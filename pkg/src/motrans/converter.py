"""Color-weight converter: turn a vertex-relabel action into new skinning weights.

Reassigning a vertex to part k synthesizes its new weight row as a
normalized blend over the vertices currently belonging to k, with each
member's influence the product of an inverse-distance term (near members
matter more) and a kernel-density term (members in dense regions of the
part matter more, damping isolated mispredictions).

Normalization is L1 so that rows stay on the weight simplex required by
the LBS deformer. Bandwidth follows Scott's rule for 3-D data with a
floor proportional to the mesh bounding-box diagonal so single-member
and coincident-member part sets remain well-defined.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ContractError, DegenerateRowError, FormatError
from .mesh import Mesh
from .skinning import SkinningWeights, argmax_labels

SNAP_DISTANCE = 1e-12


class _Snap:
    """Sentinel returned by idw_weight at zero distance."""

    def __repr__(self):
        return "SNAP"


SNAP = _Snap()


@dataclass(frozen=True)
class ConverterConfig:
    idw_power: float = 1.0
    bandwidth_floor: float = 1e-3  # fraction of the bounding-box diagonal

    def __post_init__(self):
        if self.idw_power <= 0:
            raise ContractError("idw_power must be positive")
        if self.bandwidth_floor <= 0:
            raise ContractError("bandwidth_floor must be positive")


@dataclass(frozen=True)
class EditCommand:
    """One weight-editor action: move these vertices to this part."""

    vertex_ids: frozenset[int]
    target_label: int

    def __post_init__(self):
        ids = frozenset(int(v) for v in self.vertex_ids)
        if not ids:
            raise ContractError("edit command needs at least one vertex")
        if any(v < 0 for v in ids):
            raise ContractError("vertex ids must be non-negative")
        if self.target_label < 0:
            raise ContractError("target label must be non-negative")
        object.__setattr__(self, "vertex_ids", ids)

    def validate_against(self, weights: SkinningWeights) -> None:
        if max(self.vertex_ids) >= weights.vertex_count:
            raise ContractError(
                f"vertex id {max(self.vertex_ids)} out of range [0, {weights.vertex_count})"
            )
        if self.target_label >= weights.part_count:
            raise ContractError(
                f"label {self.target_label} out of range [0, {weights.part_count})"
            )

    def to_json(self) -> str:
        return json.dumps({"vertices": sorted(self.vertex_ids), "label": self.target_label})

    @classmethod
    def from_json(cls, text) -> "EditCommand":
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise FormatError(f"edit command JSON malformed: {e}") from None
        if not isinstance(doc, dict) or "vertices" not in doc or "label" not in doc:
            raise FormatError('edit command needs "vertices" and "label" keys')
        return cls(vertex_ids=frozenset(doc["vertices"]), target_label=int(doc["label"]))


def scott_bandwidth(points: np.ndarray, config: ConverterConfig,
                    bbox_diagonal: float | None = None) -> float:
    """Scott's rule for 3-D data: h = n^(-1/7) * mean per-axis sample std.

    Floored at bandwidth_floor * bbox_diagonal (diagonal of the point set
    itself when none is supplied; unit scale when that degenerates), so
    n = 1 and coincident point sets get a positive bandwidth.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    n = len(points)
    if n == 0:
        raise ContractError("bandwidth needs at least one point")
    if bbox_diagonal is None:
        bbox_diagonal = float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
    floor = config.bandwidth_floor * (bbox_diagonal if bbox_diagonal > 0 else 1.0)
    if n < 2:
        return floor
    sigma = float(points.std(axis=0, ddof=1).mean())
    return max(n ** (-1.0 / 7.0) * sigma, floor)


def kde_density(points: np.ndarray, query: np.ndarray, config: ConverterConfig,
                bandwidth: float | None = None,
                bbox_diagonal: float | None = None) -> float:
    """Gaussian kernel density of `query` under the sample `points`.

    f(x) = 1/(n h^3 (2 pi)^(3/2)) * sum_j exp(-|x - x_j|^2 / (2 h^2))
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(points) == 0:
        raise ContractError("kde_density needs a non-empty point set")
    if bandwidth is None:
        bandwidth = scott_bandwidth(points, config, bbox_diagonal)
    query = np.asarray(query, dtype=np.float64).reshape(1, 3)
    return float(kernels.kde_sum(points, query, bandwidth)[0])


def idw_weight(query: np.ndarray, member: np.ndarray, config: ConverterConfig):
    """Inverse-distance influence 1/d^p, or SNAP when the points coincide."""
    d = float(np.linalg.norm(np.asarray(query, float) - np.asarray(member, float)))
    if d < SNAP_DISTANCE:
        return SNAP
    return 1.0 / d ** config.idw_power


def coverage_map(weights: SkinningWeights) -> set[int]:
    """Labels whose argmax vertex set is non-empty."""
    return {int(k) for k in np.unique(argmax_labels(weights))}


def convert_edit(mesh: Mesh, weights: SkinningWeights, command: EditCommand,
                 config: ConverterConfig = ConverterConfig()) -> SkinningWeights:
    """Apply one edit command, returning a new weight matrix.

    Membership of the target part is snapshotted from the pre-edit weights
    with the edited vertices excluded (a vertex is never its own evidence),
    so multi-vertex commands are order-independent. Covered target: each
    edited row becomes the L1-normalized IDW*KDE blend of the members'
    rows; a member coincident with the edited vertex short-circuits to
    that member's row. Uncovered target: the target entry is zeroed and
    the row renormalized.
    """
    if weights.vertex_count != mesh.vertex_count:
        raise ContractError("weights are not bound to this mesh")
    command.validate_against(weights)

    w = weights.weights
    verts = mesh.vertices
    k = command.target_label
    edited = sorted(command.vertex_ids)

    labels = argmax_labels(weights)
    members = np.array(
        [v for v in np.nonzero(labels == k)[0] if v not in command.vertex_ids],
        dtype=np.int64,
    )

    out = np.array(w)  # writable copy; untouched rows stay bit-identical
    if members.size:
        pts = verts[members]
        h = scott_bandwidth(pts, config, bbox_diagonal=mesh.bbox_diagonal())
        eta = kernels.kde_sum(pts, pts, h)
        member_rows = w[members]
        for v in edited:
            delta = pts - verts[v]
            dist = np.sqrt((delta * delta).sum(axis=1))
            nearest = int(np.argmin(dist))
            if dist[nearest] < SNAP_DISTANCE:
                out[v] = member_rows[nearest]
                continue
            alpha = dist ** (-config.idw_power) * eta
            blended = alpha @ member_rows
            total = blended.sum()
            if total <= 0:
                raise DegenerateRowError(v, f"vertex {v}: blend collapsed to zero mass")
            out[v] = blended / total
    else:
        for v in edited:
            row = np.array(w[v])
            row[k] = 0.0
            total = row.sum()
            if total <= 0:
                raise DegenerateRowError(
                    v, f"vertex {v}: removing part {k} leaves a zero row"
                )
            out[v] = row / total
    return SkinningWeights(weights=out)
