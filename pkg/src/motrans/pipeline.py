"""End-to-end orchestration: projects, the upload -> MoCap -> MoTrans ->
results workflow, caching, label coloring, and deterministic export.

A project is a directory of diffable JSON/OBJ artifacts. The edit history
is append-only and fully determines the outputs: replaying it on a fresh
project with the same bundles reproduces the exported frames byte for byte.
"""

from __future__ import annotations

import colorsys
import hashlib
import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .anim import (
    AnimationClip,
    JointEdit,
    apply_joint_edit,
    clip_to_json,
    parse_clip,
    skin_clip,
)
from .converter import ConverterConfig, EditCommand, convert_edit
from .errors import ContractError, FormatError, MeshValidationError, StageError
from .mesh import Mesh, parse_obj, serialize_obj
from .retarget import FitDiagnostics, TransferSession, transfer_clip
from .skinning import (
    SkinningWeights,
    argmax_labels,
    part_vertex_sets,
    validate_weights,
    weights_from_json,
    weights_to_json,
)

GOLDEN_RATIO_CONJUGATE = 0.618033988749895

STAGES = ("upload", "mocap", "motrans", "results")


def _sha256(data) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


@dataclass
class SourceBundle:
    mesh: Mesh                      # rest-pose human character
    weights: SkinningWeights        # joint-space weights, K = joint count
    clip: AnimationClip | None = None


@dataclass
class TargetBundle:
    mesh: Mesh
    weights: SkinningWeights


@dataclass
class MotransResult:
    frames: list[Mesh]
    diagnostics: list[FitDiagnostics]
    clip_hash: str
    weights_hash: str
    cache_hit: bool


class Project:
    """One retargeting session: bundles, edit history, cached results.

    Mutating operations must be externally serialized (the HTTP layer holds
    a per-project lock); reads are safe to run concurrently with reads.
    """

    def __init__(self, source: SourceBundle, target: TargetBundle,
                 project_id: str | None = None):
        self.id = project_id or uuid.uuid4().hex[:12]
        self.source = source
        self.target = target
        self.stage = "mocap" if source.clip is None else "motrans"
        self.history: list[dict] = []
        self.lock = threading.RLock()
        self._cache: dict[tuple[str, str], MotransResult] = {}
        self._result: MotransResult | None = None

    # -- hashing -------------------------------------------------------------

    def clip_hash(self) -> str:
        if self.source.clip is None:
            raise StageError("project has no motion clip yet")
        return _sha256(clip_to_json(self.source.clip))

    def weights_hash(self) -> str:
        return _sha256(weights_to_json(self.target.weights))

    # -- edits ---------------------------------------------------------------

    def apply_weight_edit(self, command: EditCommand,
                          config: ConverterConfig = ConverterConfig()) -> None:
        command.validate_against(self.target.weights)
        self.target.weights = convert_edit(self.target.mesh, self.target.weights,
                                           command, config)
        self.history.append({
            "type": "weight-edit",
            "timestamp": time.time(),
            "payload": json.loads(command.to_json()),
        })

    def apply_pose_edit(self, edit: JointEdit) -> None:
        if self.source.clip is None:
            raise StageError("project has no motion clip yet")
        self.source.clip = apply_joint_edit(self.source.clip, edit)
        self.history.append({
            "type": "pose-edit",
            "timestamp": time.time(),
            "payload": json.loads(edit.to_json()),
        })

    def attach_clip(self, clip: AnimationClip) -> None:
        if clip.skeleton.joint_count != self.source.weights.part_count:
            raise ContractError(
                f"clip has {clip.skeleton.joint_count} joints; source weights have "
                f"{self.source.weights.part_count} parts"
            )
        self.source.clip = clip
        self.stage = "motrans"

    # -- results --------------------------------------------------------------

    def run_motrans(self) -> MotransResult:
        if self.source.clip is None:
            raise StageError("run MoCap (or attach a clip) before MoTrans")
        key = (self.clip_hash(), self.weights_hash())
        cached = self._cache.get(key)
        if cached is not None:
            self._result = MotransResult(frames=cached.frames,
                                         diagnostics=cached.diagnostics,
                                         clip_hash=key[0], weights_hash=key[1],
                                         cache_hit=True)
            return self._result

        posed_frames = skin_clip(self.source.clip, self.source.mesh, self.source.weights)
        session = TransferSession.create(
            source_rest=self.source.mesh,
            target_rest=self.target.mesh,
            source_weights=self.source.weights,
            target_weights=self.target.weights,
        )
        frames, diagnostics = transfer_clip(session, posed_frames,
                                            collect_diagnostics=True)
        result = MotransResult(frames=frames, diagnostics=diagnostics,
                               clip_hash=key[0], weights_hash=key[1], cache_hit=False)
        self._cache[key] = result
        self._result = result
        self.stage = "results"
        return result

    @property
    def result(self) -> MotransResult | None:
        return self._result


def create_project(source: SourceBundle, target: TargetBundle,
                   project_id: str | None = None) -> Project:
    """Validate both bundles once and issue a project.

    Any validator failure rejects creation with the full report.
    """
    problems: list[str] = []
    for side, mesh, weights in (("source", source.mesh, source.weights),
                                ("target", target.mesh, target.weights)):
        if weights.vertex_count != mesh.vertex_count:
            problems.append(
                f"{side}: weights have {weights.vertex_count} rows for "
                f"{mesh.vertex_count} vertices"
            )
        for v in validate_weights(weights):
            problems.append(f"{side}: row {v.row}: {v.kind} violation ({v.detail})")
    if source.weights.part_count != target.weights.part_count:
        problems.append(
            f"part count mismatch: source {source.weights.part_count}, "
            f"target {target.weights.part_count}"
        )
    if source.clip is not None and \
            source.clip.skeleton.joint_count != source.weights.part_count:
        problems.append(
            f"clip has {source.clip.skeleton.joint_count} joints; source weights "
            f"have {source.weights.part_count} parts"
        )
    if problems:
        raise MeshValidationError("project rejected:\n  " + "\n  ".join(problems))
    return Project(source=source, target=target, project_id=project_id)


# --- label colors -----------------------------------------------------------------

def label_colors(weights: SkinningWeights) -> tuple[dict[int, tuple[int, int, int]],
                                                    list[tuple[int, int, int]]]:
    """Deterministic golden-ratio hue palette plus per-vertex colors.

    hue(k) = fract(k * 0.618...), full saturation and value; vertex color
    is the palette entry of its argmax label.
    """
    palette = {}
    for k in range(weights.part_count):
        hue = (k * GOLDEN_RATIO_CONJUGATE) % 1.0
        r, g, b = colorsys.hsv_to_rgb(hue, 1.0, 1.0)
        palette[k] = (round(r * 255), round(g * 255), round(b * 255))
    labels = argmax_labels(weights)
    vertex_colors = [palette[int(k)] for k in labels]
    return palette, vertex_colors


def highlight_correspondence(project: Project, label: int) -> tuple[list[int], list[int]]:
    """Vertex sets assigned to `label` on the source and the target.

    Either set may be empty: an uncovered part on one side signals a
    missing correspondence worth inspecting.
    """
    if not 0 <= label < project.source.weights.part_count:
        raise ContractError(
            f"label {label} out of range [0, {project.source.weights.part_count})"
        )
    src = part_vertex_sets(project.source.weights).get(label, [])
    tgt = part_vertex_sets(project.target.weights).get(label, [])
    return src, tgt


# --- export ----------------------------------------------------------------------

def export_results(project: Project, out_dir) -> dict:
    """Write frame_%04d.obj + manifest.json + diagnostics.json; returns the manifest.

    Serialization is deterministic, so re-exporting the same result is
    byte-identical.
    """
    result = project.result
    if result is None:
        raise StageError("no MoTrans results to export; run motrans first")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    hashes = []
    for i, frame in enumerate(result.frames):
        text = serialize_obj(frame)
        (out / f"frame_{i:04d}.obj").write_text(text)
        hashes.append(_sha256(text))

    clip = project.source.clip
    manifest = {
        "project": project.id,
        "frame_rate": clip.frame_rate if clip else None,
        "frame_count": len(result.frames),
        "vertex_count": project.target.mesh.vertex_count,
        "clip_hash": result.clip_hash,
        "weights_hash": result.weights_hash,
        "frame_hashes": hashes,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    (out / "diagnostics.json").write_text(json.dumps(
        {"frames": [d.to_dict() for d in result.diagnostics]}, indent=2, sort_keys=True))
    return manifest


# --- persistence and replay ----------------------------------------------------------

def save_project(project: Project, root) -> Path:
    """Directory-per-project layout with plain JSON/OBJ artifacts."""
    pdir = Path(root) / project.id
    (pdir / "source").mkdir(parents=True, exist_ok=True)
    (pdir / "target").mkdir(parents=True, exist_ok=True)
    (pdir / "source" / "mesh.obj").write_text(serialize_obj(project.source.mesh))
    (pdir / "source" / "weights.json").write_text(weights_to_json(project.source.weights))
    if project.source.clip is not None:
        (pdir / "source" / "clip.json").write_text(clip_to_json(project.source.clip))
    (pdir / "target" / "mesh.obj").write_text(serialize_obj(project.target.mesh))
    (pdir / "target" / "weights.json").write_text(weights_to_json(project.target.weights))
    (pdir / "project.json").write_text(json.dumps({
        "id": project.id,
        "stage": project.stage,
        "history": project.history,
    }, indent=2))
    return pdir


def load_project(pdir) -> Project:
    pdir = Path(pdir)
    meta = json.loads((pdir / "project.json").read_text())
    clip_path = pdir / "source" / "clip.json"
    source = SourceBundle(
        mesh=parse_obj((pdir / "source" / "mesh.obj").read_text()),
        weights=weights_from_json((pdir / "source" / "weights.json").read_text()),
        clip=parse_clip(clip_path.read_text()) if clip_path.exists() else None,
    )
    target = TargetBundle(
        mesh=parse_obj((pdir / "target" / "mesh.obj").read_text()),
        weights=weights_from_json((pdir / "target" / "weights.json").read_text()),
    )
    project = Project(source=source, target=target, project_id=meta["id"])
    project.stage = meta.get("stage", project.stage)
    project.history = list(meta.get("history", []))
    return project


def replay_history(project: Project, history: list[dict],
                   config: ConverterConfig = ConverterConfig()) -> Project:
    """Re-apply a recorded edit history to a fresh project, in order."""
    for entry in history:
        payload = json.dumps(entry["payload"])
        if entry["type"] == "weight-edit":
            project.apply_weight_edit(EditCommand.from_json(payload), config)
        elif entry["type"] == "pose-edit":
            project.apply_pose_edit(JointEdit.from_json(payload))
        else:
            raise FormatError(f"unknown history entry type {entry['type']!r}")
    return project
