"""Frame-by-frame motion transfer between characters sharing a part layout.

Each frame is independent: estimate a rigid transform per part from the
source's rest/posed vertex pair by weighted Procrustes, then articulate
the target with centroid-relative LBS. Applying the raw world-space fits
to the target would drag its parts onto the source's part locations, so
each part rotates about its own target rest centroid and inherits only
the source part-centroid displacement.

Both characters are normalized (centroid at origin, unit height) inside
the session; results are mapped back to the target's original frame on
the way out, which also compensates the characters' height ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels, quat
from .errors import ContractError
from .mesh import Mesh, NormalizationRecord, denormalize, normalize
from .skinning import PartTransformSet, SkinningWeights

EPS_MASS = 1e-6      # fraction of total weight mass below which a part is degenerate
COND_TOL = 1e-12     # collinearity guard on singular values


@dataclass(frozen=True)
class FitDiagnostics:
    """Per-part fit quality for one frame."""

    residuals: np.ndarray   # weighted RMS error per part
    masses: np.ndarray      # total weight mass per part
    degenerate: np.ndarray  # bool per part: identity fallback used

    def to_dict(self) -> dict:
        return {
            "residuals": self.residuals.tolist(),
            "masses": self.masses.tolist(),
            "degenerate": self.degenerate.tolist(),
        }


def _weighted_procrustes(rest: np.ndarray, posed: np.ndarray, w: np.ndarray):
    """Closed-form weighted rigid fit rest -> posed, det(R) = +1 enforced."""
    m = w.sum()
    mu_rest = (w @ rest) / m
    mu_posed = (w @ posed) / m
    xc = rest - mu_rest
    yc = posed - mu_posed
    cov = (xc * w[:, None]).T @ yc
    U, S, Vt = np.linalg.svd(cov)
    if S[0] <= 0 or S[1] <= COND_TOL * S[0]:
        return None  # coincident or collinear part: rotation is underdetermined
    d = 1.0 if np.linalg.det(Vt.T @ U.T) >= 0 else -1.0
    R = Vt.T @ np.diag([1.0, 1.0, d]) @ U.T
    t = mu_posed - R @ mu_rest
    err = (rest @ R.T + t) - posed
    residual = float(np.sqrt((w * (err * err).sum(axis=1)).sum() / m))
    return R, t, residual


def fit_part_transforms(
    source_rest: Mesh,
    source_posed: Mesh,
    source_weights: SkinningWeights,
    frame_index: int = 0,
) -> tuple[PartTransformSet, FitDiagnostics]:
    """Estimate per-part rigid transforms taking the rest pose to the posed frame.

    Parts with negligible weight mass or an ill-conditioned covariance get
    the identity transform and a degenerate flag.
    """
    if source_rest.vertex_count != source_posed.vertex_count:
        raise ContractError(
            f"rest has {source_rest.vertex_count} vertices, posed has "
            f"{source_posed.vertex_count}"
        )
    if source_weights.vertex_count != source_rest.vertex_count:
        raise ContractError("weights are not bound to the source mesh")

    W = source_weights.weights
    K = source_weights.part_count
    masses = W.sum(axis=0)
    mass_threshold = EPS_MASS * masses.sum()

    rotations = np.tile(quat.IDENTITY, (K, 1))
    translations = np.zeros((K, 3))
    residuals = np.zeros(K)
    degenerate = np.zeros(K, dtype=bool)

    for k in range(K):
        if masses[k] < mass_threshold:
            degenerate[k] = True
            continue
        fit = _weighted_procrustes(source_rest.vertices, source_posed.vertices, W[:, k])
        if fit is None:
            degenerate[k] = True
            continue
        R, t, residuals[k] = fit
        rotations[k] = quat.from_matrix(R)
        translations[k] = t

    transforms = PartTransformSet(rotations=rotations, translations=translations,
                                  frame_index=frame_index)
    return transforms, FitDiagnostics(residuals=residuals, masses=masses,
                                      degenerate=degenerate)


@dataclass(frozen=True)
class TransferSession:
    """Immutable per-pair state reused across every frame of a clip.

    Weights are validated and part centroids computed once per session;
    the per-frame work is just the fit and one LBS pass.
    """

    source_rest: Mesh                     # normalized
    target_rest: Mesh                     # normalized
    source_weights: SkinningWeights
    target_weights: SkinningWeights
    source_record: NormalizationRecord
    target_record: NormalizationRecord
    scale_ratio: float                    # target height / source height, pre-normalization

    def __post_init__(self):
        if self.source_weights.vertex_count != self.source_rest.vertex_count:
            raise ContractError("source weights not bound to source mesh")
        if self.target_weights.vertex_count != self.target_rest.vertex_count:
            raise ContractError("target weights not bound to target mesh")
        if self.source_weights.part_count != self.target_weights.part_count:
            raise ContractError(
                f"part count mismatch: source {self.source_weights.part_count}, "
                f"target {self.target_weights.part_count}"
            )

    @property
    def part_count(self) -> int:
        return self.source_weights.part_count

    @classmethod
    def create(cls, source_rest: Mesh, target_rest: Mesh,
               source_weights: SkinningWeights,
               target_weights: SkinningWeights) -> "TransferSession":
        """Build a session from raw (un-normalized) rest meshes."""
        src_norm, src_rec = normalize(source_rest)
        tgt_norm, tgt_rec = normalize(target_rest)
        return cls(
            source_rest=src_norm,
            target_rest=tgt_norm,
            source_weights=source_weights,
            target_weights=target_weights,
            source_record=src_rec,
            target_record=tgt_rec,
            scale_ratio=src_rec.scale / tgt_rec.scale,
        )

    def normalize_source_frame(self, frame: Mesh) -> Mesh:
        return frame.with_vertices(
            (frame.vertices + self.source_record.translation) * self.source_record.scale
        )

    def _part_centroids(self, mesh: Mesh, weights: SkinningWeights):
        W = weights.weights
        masses = W.sum(axis=0)
        centroids = np.zeros((weights.part_count, 3))
        ok = masses > 0
        centroids[ok] = (W.T[ok] @ mesh.vertices) / masses[ok][:, None]
        return centroids, masses


def apply_to_target(session: TransferSession, transforms: PartTransformSet) -> Mesh:
    """Articulate the (normalized) target with centroid-relative part motion.

    y_j = sum_k W_T[j,k] * (R_k (y_j - cT_k) + cT_k + dc_k) where cT_k is
    the target part centroid and dc_k the source part-centroid
    displacement implied by the fit (R_k cH_k + t_k - cH_k). Degenerate
    parts carry identity transforms, so dc_k vanishes and they contribute
    rest geometry.
    """
    if transforms.part_count != session.part_count:
        raise ContractError(
            f"transform set has {transforms.part_count} parts, session has "
            f"{session.part_count}"
        )
    src_centroids, _ = session._part_centroids(session.source_rest, session.source_weights)
    tgt_centroids, _ = session._part_centroids(session.target_rest, session.target_weights)

    R = quat.to_matrix(transforms.rotations)                       # (K,3,3)
    posed_src_centroids = np.einsum("kij,kj->ki", R, src_centroids) + transforms.translations
    delta_c = posed_src_centroids - src_centroids

    # fold the centroid-relative form into plain per-part rigid transforms
    eff_t = tgt_centroids + delta_c - np.einsum("kij,kj->ki", R, tgt_centroids)
    out = kernels.lbs_blend(session.target_rest.vertices,
                            session.target_weights.weights, R, eff_t)
    return session.target_rest.with_vertices(out)


def transfer_clip(session: TransferSession, source_frames: list[Mesh],
                  collect_diagnostics: bool = False):
    """Retarget every source frame; frames are independent and order-stable.

    Input frames are in the source's original coordinate frame; outputs are
    returned in the target's original frame. Returns the frame list, or
    (frames, diagnostics) when collect_diagnostics is set.
    """
    out_frames: list[Mesh] = []
    diags: list[FitDiagnostics] = []
    for i, frame in enumerate(source_frames):
        if frame.vertex_count != session.source_rest.vertex_count:
            raise ContractError(
                f"frame {i}: has {frame.vertex_count} vertices, source rest has "
                f"{session.source_rest.vertex_count}"
            )
        posed = session.normalize_source_frame(frame)
        transforms, diag = fit_part_transforms(
            session.source_rest, posed, session.source_weights, frame_index=i
        )
        result = apply_to_target(session, transforms)
        out_frames.append(denormalize(result, session.target_record))
        diags.append(diag)
    if collect_diagnostics:
        return out_frames, diags
    return out_frames
