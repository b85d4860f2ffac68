"""Synthetic fixture characters for tests, demos, and the bundled demo project.

Builds a small 4-part humanoid (torso, left arm, right arm, head) as a
box-per-part mesh with joint-space skinning weights and a waving-arm clip,
plus a narrower target variant with a deliberately mislabeled patch on the
right arm so the weight-editor correction workflow can be exercised.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .anim import AnimationClip, Joint, JointPose, Skeleton, clip_to_json, rest_frame
from .converter import EditCommand
from .mesh import Mesh, serialize_obj
from .skinning import SkinningWeights, weights_to_json
from . import quat

# joint layout: index, name, parent, offset from parent
_JOINTS = (
    ("torso", None, (0.0, 0.0, 0.0)),
    ("left_arm", 0, (0.55, 0.45, 0.0)),
    ("right_arm", 0, (-0.55, 0.45, 0.0)),
    ("head", 0, (0.0, 0.95, 0.0)),
)

PART_TORSO, PART_LEFT_ARM, PART_RIGHT_ARM, PART_HEAD = range(4)


def _box(center, size):
    """8 corner vertices and 12 triangles of an axis-aligned box."""
    cx, cy, cz = center
    hx, hy, hz = size[0] / 2, size[1] / 2, size[2] / 2
    corners = np.array([
        [cx - hx, cy - hy, cz - hz], [cx + hx, cy - hy, cz - hz],
        [cx + hx, cy + hy, cz - hz], [cx - hx, cy + hy, cz - hz],
        [cx - hx, cy - hy, cz + hz], [cx + hx, cy - hy, cz + hz],
        [cx + hx, cy + hy, cz + hz], [cx - hx, cy + hy, cz + hz],
    ])
    faces = np.array([
        [0, 2, 1], [0, 3, 2], [4, 5, 6], [4, 6, 7],
        [0, 1, 5], [0, 5, 4], [2, 3, 7], [2, 7, 6],
        [1, 2, 6], [1, 6, 5], [3, 0, 4], [3, 4, 7],
    ])
    return corners, faces


def _lattice(center, size, n=3):
    """n x n x n interior grid of vertices (no faces)."""
    axes = [np.linspace(c - s / 2 * 0.8, c + s / 2 * 0.8, n)
            for c, s in zip(center, size)]
    gx, gy, gz = np.meshgrid(*axes, indexing="ij")
    return np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)


def make_skeleton() -> Skeleton:
    return Skeleton(joints=tuple(
        Joint(name=n, parent=p, offset=np.array(o)) for n, p, o in _JOINTS
    ))


def _joint_rest_positions() -> np.ndarray:
    pos = np.zeros((len(_JOINTS), 3))
    for i, (_, parent, offset) in enumerate(_JOINTS):
        pos[i] = np.array(offset) if parent is None else pos[parent] + np.array(offset)
    return pos


def make_character(width_scale: float = 1.0, name: str = "humanoid") -> tuple[Mesh, np.ndarray]:
    """Box-per-part mesh; returns (mesh, per-vertex part labels)."""
    centers = _joint_rest_positions()
    centers[:, 0] *= width_scale
    sizes = [
        (0.6 * width_scale, 0.8, 0.3),   # torso
        (0.5 * width_scale, 0.22, 0.22),  # left arm
        (0.5 * width_scale, 0.22, 0.22),  # right arm
        (0.34 * width_scale, 0.34, 0.3),  # head
    ]
    verts, faces, labels = [], [], []
    offset = 0
    for part, (center, size) in enumerate(zip(centers, sizes)):
        c, f = _box(center, size)
        grid = _lattice(center, size)
        verts.append(np.vstack([c, grid]))
        faces.append(f + offset)
        n = len(c) + len(grid)
        labels.extend([part] * n)
        offset += n
    mesh = Mesh(vertices=np.vstack(verts), faces=np.vstack(faces), name=name)
    return mesh, np.array(labels, dtype=np.int64)


def one_hot_weights(labels: np.ndarray, part_count: int) -> SkinningWeights:
    w = np.zeros((len(labels), part_count))
    w[np.arange(len(labels)), labels] = 1.0
    return SkinningWeights(weights=w)


def make_wave_clip(frame_count: int = 10, frame_rate: float = 30.0) -> AnimationClip:
    """Both arms swing about z; torso and head hold the rest pose."""
    skeleton = make_skeleton()
    frames = []
    for i in range(frame_count):
        angle = 0.9 * np.sin(2 * np.pi * i / max(frame_count, 1))
        poses = list(rest_frame(skeleton))
        poses[PART_LEFT_ARM] = JointPose(
            rotation=quat.from_axis_angle((0, 0, 1), angle),
            translation=np.zeros(3),
        )
        poses[PART_RIGHT_ARM] = JointPose(
            rotation=quat.from_axis_angle((0, 0, 1), -angle),
            translation=np.zeros(3),
        )
        frames.append(tuple(poses))
    return AnimationClip(skeleton=skeleton, frames=tuple(frames), frame_rate=frame_rate)


def mislabeled_region(labels: np.ndarray) -> list[int]:
    """A patch of right-arm lattice vertices to mislabel as head."""
    right = np.nonzero(labels == PART_RIGHT_ARM)[0]
    return [int(v) for v in right[-6:]]  # deepest lattice points of the arm


def make_fixture_project():
    """Source bundle, target bundle pieces, and the corrective edit command.

    The target is a narrower variant of the source with a patch of
    right-arm vertices mislabeled as head; the returned command reassigns
    them to the right arm.
    """
    src_mesh, src_labels = make_character(1.0, name="human")
    tgt_mesh, tgt_labels = make_character(0.8, name="target")
    bad = mislabeled_region(tgt_labels)
    tgt_labels_bad = np.array(tgt_labels)
    tgt_labels_bad[bad] = PART_HEAD

    return {
        "source_mesh": src_mesh,
        "source_weights": one_hot_weights(src_labels, len(_JOINTS)),
        "clip": make_wave_clip(),
        "target_mesh": tgt_mesh,
        "target_weights": one_hot_weights(tgt_labels_bad, len(_JOINTS)),
        "fix_command": EditCommand(vertex_ids=frozenset(bad),
                                   target_label=PART_RIGHT_ARM),
    }


def write_fixture_tree(root) -> Path:
    """Write the demo project and a MoCap fixture bundle under `root`."""
    root = Path(root)
    fx = make_fixture_project()
    src = root / "source"
    tgt = root / "target"
    src.mkdir(parents=True, exist_ok=True)
    tgt.mkdir(parents=True, exist_ok=True)
    (src / "mesh.obj").write_text(serialize_obj(fx["source_mesh"]))
    (src / "weights.json").write_text(weights_to_json(fx["source_weights"]))
    (src / "clip.json").write_text(clip_to_json(fx["clip"]))
    (tgt / "mesh.obj").write_text(serialize_obj(fx["target_mesh"]))
    (tgt / "weights.json").write_text(weights_to_json(fx["target_weights"]))
    (root / "fix_command.json").write_text(fx["fix_command"].to_json())

    mocap = root / "mocap" / "dance.mp4"
    mocap.mkdir(parents=True, exist_ok=True)
    (mocap / "clip.json").write_text(clip_to_json(fx["clip"]))
    (mocap / "mesh.obj").write_text(serialize_obj(fx["source_mesh"]))
    (mocap / "weights.json").write_text(weights_to_json(fx["source_weights"]))
    return root
