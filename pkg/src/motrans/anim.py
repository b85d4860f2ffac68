"""Skeletal animation backend: joint hierarchy, FK, per-frame pose edits,
clip JSON I/O, and the MoCap service client (mock + HTTP).

FK convention: a joint's local transform is its rest offset plus local
translation, followed by the local rotation, composed under the parent's
world transform. Joint position edits are parent-space translation deltas.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import quat
from .errors import (
    ContractError,
    DurationLimitError,
    FixtureNotFoundError,
    FormatError,
    TransportError,
)
from .mesh import Mesh, parse_obj
from .skinning import PartTransformSet, SkinningWeights, lbs_deform, weights_from_json

MAX_MOCAP_SECONDS = 20.0


@dataclass(frozen=True)
class Joint:
    name: str
    parent: int | None          # None for the single root
    offset: np.ndarray          # rest offset from parent, (3,)

    def __post_init__(self):
        o = np.asarray(self.offset, dtype=np.float64).reshape(3)
        o.setflags(write=False)
        object.__setattr__(self, "offset", o)


@dataclass(frozen=True)
class Skeleton:
    """Joint forest with a single root; parents precede children."""

    joints: tuple[Joint, ...]

    def __post_init__(self):
        joints = tuple(self.joints)
        roots = [i for i, j in enumerate(joints) if j.parent is None]
        if len(roots) != 1:
            raise FormatError(f"skeleton must have exactly one root, found {len(roots)}")
        for i, j in enumerate(joints):
            if j.parent is not None and not 0 <= j.parent < i:
                raise FormatError(
                    f"joint {i} ({j.name!r}): parent index {j.parent} must precede it"
                )
        object.__setattr__(self, "joints", joints)

    @property
    def joint_count(self) -> int:
        return len(self.joints)


@dataclass(frozen=True)
class JointPose:
    rotation: np.ndarray     # unit quaternion, scalar-first
    translation: np.ndarray  # (3,)

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=np.float64).reshape(4)
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        r.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)

    @classmethod
    def identity(cls) -> "JointPose":
        return cls(rotation=quat.IDENTITY, translation=np.zeros(3))


@dataclass(frozen=True)
class AnimationClip:
    skeleton: Skeleton
    frames: tuple[tuple[JointPose, ...], ...]
    frame_rate: float = 30.0

    def __post_init__(self):
        frames = tuple(tuple(f) for f in self.frames)
        for i, f in enumerate(frames):
            if len(f) != self.skeleton.joint_count:
                raise FormatError(
                    f"frame {i} has {len(f)} poses for {self.skeleton.joint_count} joints"
                )
            for j, pose in enumerate(f):
                if abs(np.linalg.norm(pose.rotation) - 1.0) > 1e-9:
                    raise FormatError(f"frame {i} joint {j}: non-unit quaternion")
        if self.frame_rate <= 0:
            raise FormatError("frame_rate must be positive")
        object.__setattr__(self, "frames", frames)

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    @property
    def duration_seconds(self) -> float:
        return self.frame_count / self.frame_rate


@dataclass(frozen=True)
class JointEdit:
    """6-DoF delta applied to one (frame, joint) pose."""

    frame_index: int
    joint_index: int
    rotation_delta: np.ndarray     # unit quaternion, composed on the left
    translation_delta: np.ndarray  # added to the local translation

    def __post_init__(self):
        r = quat.normalize(np.asarray(self.rotation_delta, dtype=np.float64).reshape(4))
        t = np.asarray(self.translation_delta, dtype=np.float64).reshape(3)
        r.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "rotation_delta", r)
        object.__setattr__(self, "translation_delta", t)

    def to_json(self) -> str:
        return json.dumps({
            "frame": self.frame_index,
            "joint": self.joint_index,
            "rot": self.rotation_delta.tolist(),
            "trans": self.translation_delta.tolist(),
        })

    @classmethod
    def from_json(cls, text) -> "JointEdit":
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise FormatError(f"joint edit JSON malformed: {e}") from None
        try:
            return cls(frame_index=int(doc["frame"]), joint_index=int(doc["joint"]),
                       rotation_delta=doc.get("rot", [1, 0, 0, 0]),
                       translation_delta=doc.get("trans", [0, 0, 0]))
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"joint edit JSON malformed: {e}") from None


def _local_matrix(joint: Joint, pose: JointPose) -> np.ndarray:
    m = np.eye(4)
    m[:3, :3] = quat.to_matrix(pose.rotation)
    m[:3, 3] = joint.offset + pose.translation
    return m


def forward_kinematics(skeleton: Skeleton, frame: tuple[JointPose, ...]) -> np.ndarray:
    """World 4x4 transforms for every joint: world(j) = world(parent) @ local(j)."""
    if len(frame) != skeleton.joint_count:
        raise ContractError(
            f"frame has {len(frame)} poses for {skeleton.joint_count} joints"
        )
    world = np.empty((skeleton.joint_count, 4, 4))
    for j, joint in enumerate(skeleton.joints):
        local = _local_matrix(joint, frame[j])
        world[j] = local if joint.parent is None else world[joint.parent] @ local
    return world


def rest_frame(skeleton: Skeleton) -> tuple[JointPose, ...]:
    return tuple(JointPose.identity() for _ in range(skeleton.joint_count))


def joint_world_positions(skeleton: Skeleton, frame: tuple[JointPose, ...]) -> np.ndarray:
    return forward_kinematics(skeleton, frame)[:, :3, 3]


def apply_joint_edit(clip: AnimationClip, edit: JointEdit) -> AnimationClip:
    """Return a clip where exactly one pose is changed; all others are shared."""
    if not 0 <= edit.frame_index < clip.frame_count:
        raise ContractError(f"frame {edit.frame_index} out of range [0, {clip.frame_count})")
    if not 0 <= edit.joint_index < clip.skeleton.joint_count:
        raise ContractError(
            f"joint {edit.joint_index} out of range [0, {clip.skeleton.joint_count})"
        )
    old = clip.frames[edit.frame_index][edit.joint_index]
    new_pose = JointPose(
        rotation=quat.normalize(quat.multiply(edit.rotation_delta, old.rotation)),
        translation=old.translation + edit.translation_delta,
    )
    frames = list(clip.frames)
    frame = list(frames[edit.frame_index])
    frame[edit.joint_index] = new_pose
    frames[edit.frame_index] = tuple(frame)
    return replace(clip, frames=tuple(frames))


def skin_clip(clip: AnimationClip, rest_mesh: Mesh,
              skeletal_weights: SkinningWeights) -> list[Mesh]:
    """Pose the mesh for every frame via LBS with T_j = world(j) @ world_rest(j)^-1."""
    K = clip.skeleton.joint_count
    if skeletal_weights.part_count != K:
        raise ContractError(
            f"weights have {skeletal_weights.part_count} parts for {K} joints"
        )
    if skeletal_weights.vertex_count != rest_mesh.vertex_count:
        raise ContractError("weights are not bound to the rest mesh")

    rest_world = forward_kinematics(clip.skeleton, rest_frame(clip.skeleton))
    rest_inv = np.linalg.inv(rest_world)
    meshes = []
    for frame in clip.frames:
        world = forward_kinematics(clip.skeleton, frame)
        T = world @ rest_inv                      # (K,4,4) rigid per joint
        rotations = np.stack([quat.from_matrix(T[j, :3, :3]) for j in range(K)])
        transforms = PartTransformSet(rotations=rotations, translations=T[:, :3, 3])
        meshes.append(lbs_deform(rest_mesh, skeletal_weights, transforms))
    return meshes


# --- clip JSON ----------------------------------------------------------------

def clip_to_json(clip: AnimationClip) -> str:
    return json.dumps({
        "frame_rate": clip.frame_rate,
        "skeleton": [
            {"name": j.name, "parent": j.parent, "offset": j.offset.tolist()}
            for j in clip.skeleton.joints
        ],
        "frames": [
            [{"rot": p.rotation.tolist(), "trans": p.translation.tolist()} for p in frame]
            for frame in clip.frames
        ],
    })


def parse_clip(text) -> AnimationClip:
    """Parse and validate clip JSON; near-unit quaternions (within 1e-3) are
    renormalized, anything further off is rejected."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"clip JSON malformed: {e}") from None
    if not isinstance(doc, dict) or "skeleton" not in doc or "frames" not in doc:
        raise FormatError('clip JSON needs "skeleton" and "frames" keys')
    try:
        joints = tuple(
            Joint(name=str(j["name"]),
                  parent=None if j["parent"] is None else int(j["parent"]),
                  offset=j["offset"])
            for j in doc["skeleton"]
        )
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"skeleton record malformed: {e}") from None
    skeleton = Skeleton(joints=joints)
    frames = []
    for i, frame in enumerate(doc["frames"]):
        poses = []
        for j, p in enumerate(frame):
            try:
                rot = np.asarray(p["rot"], dtype=np.float64).reshape(4)
                trans = np.asarray(p["trans"], dtype=np.float64).reshape(3)
            except (KeyError, TypeError, ValueError) as e:
                raise FormatError(f"frame {i} joint {j}: {e}") from None
            norm = float(np.linalg.norm(rot))
            if abs(norm - 1.0) > 1e-3:
                raise FormatError(
                    f"frame {i} joint {j}: quaternion norm {norm:.6g} too far from 1"
                )
            poses.append(JointPose(rotation=rot / norm, translation=trans))
        frames.append(tuple(poses))
    return AnimationClip(skeleton=skeleton, frames=tuple(frames),
                         frame_rate=float(doc.get("frame_rate", 30.0)))


# --- MoCap service clients ------------------------------------------------------

@dataclass(frozen=True)
class MoCapRequest:
    video_reference: str
    duration_seconds: float


@dataclass(frozen=True)
class MoCapResult:
    clip: AnimationClip
    rest_mesh: Mesh
    weights: SkinningWeights


class MockMoCapClient:
    """Resolves requests from a local fixture directory keyed by video filename.

    Fixture layout: <root>/<video name>/{clip.json, mesh.obj, weights.json}.
    """

    def __init__(self, fixture_dir):
        self.fixture_dir = Path(fixture_dir)

    def fetch(self, request: MoCapRequest) -> MoCapResult:
        bundle = self.fixture_dir / Path(request.video_reference).name
        if not bundle.is_dir():
            raise FixtureNotFoundError(f"no MoCap fixture for {request.video_reference!r}")
        clip = parse_clip((bundle / "clip.json").read_text())
        mesh = parse_obj((bundle / "mesh.obj").read_text())
        weights = weights_from_json((bundle / "weights.json").read_text())
        return MoCapResult(clip=clip, rest_mesh=mesh, weights=weights)


class HttpMoCapClient:
    """Generic submit/poll/download client for a hosted MoCap service.

    Bearer token comes from the MOCAP_API_TOKEN environment variable.
    The concrete provider protocol is abstracted to three endpoints:
    POST /jobs, GET /jobs/{id}, GET /jobs/{id}/result.
    """

    def __init__(self, endpoint: str, max_retries: int = 3, transport=None):
        import httpx

        token = os.environ.get("MOCAP_API_TOKEN", "")
        self.endpoint = endpoint.rstrip("/")
        self.max_retries = max_retries
        self._http = httpx.Client(
            headers={"Authorization": f"Bearer {token}"} if token else {},
            transport=transport,
            timeout=30.0,
        )

    def fetch(self, request: MoCapRequest) -> MoCapResult:
        import httpx

        attempts = 0
        last_error = None
        while attempts < self.max_retries:
            attempts += 1
            try:
                job = self._http.post(
                    f"{self.endpoint}/jobs",
                    json={"video": request.video_reference,
                          "duration": request.duration_seconds},
                )
                job.raise_for_status()
                job_id = job.json()["id"]
                status = self._http.get(f"{self.endpoint}/jobs/{job_id}")
                status.raise_for_status()
                result = self._http.get(f"{self.endpoint}/jobs/{job_id}/result")
                result.raise_for_status()
                doc = result.json()
                return MoCapResult(
                    clip=parse_clip(json.dumps(doc["clip"])),
                    rest_mesh=parse_obj(doc["mesh_obj"]),
                    weights=weights_from_json(json.dumps(doc["weights"])),
                )
            except (httpx.HTTPError, KeyError) as e:
                last_error = e
        raise TransportError(f"MoCap endpoint failed: {last_error}", attempts=attempts)


def mocap_submit(request: MoCapRequest, client) -> MoCapResult:
    """Pre-flight the duration limit, then delegate to the client.

    The 20-second ceiling is checked before any I/O happens.
    """
    if request.duration_seconds > MAX_MOCAP_SECONDS:
        raise DurationLimitError(
            f"clip is {request.duration_seconds:.1f}s; the limit is "
            f"{MAX_MOCAP_SECONDS:.0f}s"
        )
    return client.fetch(request)
