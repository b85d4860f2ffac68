"""Triangle mesh container, OBJ I/O and normalization utilities.

Conventions: indices are 0-based everywhere inside the toolkit and only
converted to 1-based at the OBJ text boundary. Characters are assumed
y-up; normalization recenters the centroid at the origin and scales the
vertical (y) extent to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateGeometryError, MeshValidationError, ObjParseError


@dataclass(frozen=True)
class Mesh:
    """Triangulated vertex/face soup.

    vertices: (V, 3) float64, faces: (F, 3) int64 with 0-based indices.
    Arrays are frozen on construction so meshes are safely shareable.
    """

    vertices: np.ndarray
    faces: np.ndarray
    name: str = "mesh"

    def __post_init__(self):
        verts = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64))
        faces = np.ascontiguousarray(np.asarray(self.faces, dtype=np.int64))
        if verts.ndim != 2 or verts.shape[1] != 3:
            raise MeshValidationError(f"vertices must be (V, 3), got {verts.shape}")
        faces = faces.reshape(-1, 3) if faces.size else np.zeros((0, 3), np.int64)
        if faces.size and (faces.min() < 0 or faces.max() >= len(verts)):
            bad = int(np.argwhere((faces < 0) | (faces >= len(verts)))[0, 0])
            raise MeshValidationError(
                f"face {bad} references a vertex index outside [0, {len(verts)})"
            )
        verts.setflags(write=False)
        faces.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "faces", faces)

    @property
    def vertex_count(self) -> int:
        return self.vertices.shape[0]

    @property
    def face_count(self) -> int:
        return self.faces.shape[0]

    def with_vertices(self, vertices: np.ndarray) -> "Mesh":
        """New mesh with the same connectivity and replaced positions."""
        return Mesh(vertices=vertices, faces=self.faces, name=self.name)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        if self.vertex_count == 0:
            raise DegenerateGeometryError("empty mesh has no bounding box")
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def bbox_diagonal(self) -> float:
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))

    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)


@dataclass(frozen=True)
class NormalizationRecord:
    """Translation and scale applied by normalize(), so it can be undone."""

    translation: np.ndarray  # added to vertices before scaling
    scale: float

    def __post_init__(self):
        if self.scale <= 0:
            raise DegenerateGeometryError(f"scale must be positive, got {self.scale}")
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        t.setflags(write=False)
        object.__setattr__(self, "translation", t)


def parse_obj(data) -> Mesh:
    """Parse ASCII OBJ text (str or bytes) into a Mesh.

    Polygon faces are fan-triangulated; `vt`/`vn` references and all
    non-geometry records are discarded. Negative face indices resolve
    against the vertex count seen so far, per the OBJ convention.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    vertices: list[tuple[float, float, float]] = []
    faces: list[tuple[int, int, int]] = []
    name = "mesh"
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "v":
            if len(parts) < 4:
                raise ObjParseError(lineno, f"vertex record needs 3 coordinates: {raw!r}")
            try:
                vertices.append((float(parts[1]), float(parts[2]), float(parts[3])))
            except ValueError:
                raise ObjParseError(lineno, f"malformed numeric field in {raw!r}") from None
        elif tag == "f":
            if len(parts) < 4:
                raise ObjParseError(lineno, f"face record needs at least 3 indices: {raw!r}")
            idx = []
            for token in parts[1:]:
                head = token.split("/")[0]
                try:
                    i = int(head)
                except ValueError:
                    raise ObjParseError(lineno, f"malformed face index {token!r}") from None
                if i < 0:
                    i = len(vertices) + i  # relative to vertices parsed so far
                else:
                    i = i - 1
                if not 0 <= i < len(vertices):
                    raise MeshValidationError(
                        f"face index {token} out of range (have {len(vertices)} vertices)",
                        line_number=lineno,
                    )
                idx.append(i)
            for a, b in zip(idx[1:-1], idx[2:]):  # fan triangulation
                faces.append((idx[0], a, b))
        elif tag == "o" and len(parts) > 1:
            name = parts[1]
        # vt, vn, usemtl, g, s, ... intentionally ignored
    if not vertices:
        raise MeshValidationError("OBJ contains no vertices")
    return Mesh(vertices=np.array(vertices, dtype=np.float64),
                faces=np.array(faces, dtype=np.int64).reshape(-1, 3),
                name=name)


def serialize_obj(mesh: Mesh) -> str:
    """Serialize to OBJ text with fixed 6-decimal vertex formatting.

    Round-trip stable: re-parsing yields the same faces exactly and the
    same vertices to 1e-6.
    """
    lines = [f"o {mesh.name}"]
    for x, y, z in mesh.vertices:
        lines.append(f"v {x:.6f} {y:.6f} {z:.6f}")
    for a, b, c in mesh.faces:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    return "\n".join(lines) + "\n"


def normalize(mesh: Mesh) -> tuple[Mesh, NormalizationRecord]:
    """Recenter the centroid at the origin and scale y-extent to 1.

    Vertices map as v' = (v + translation) * scale with translation the
    negated centroid. Raises DegenerateGeometryError on zero height.
    """
    if mesh.vertex_count < 2:
        raise DegenerateGeometryError("normalization needs at least 2 vertices")
    centroid = mesh.centroid()
    height = float(mesh.vertices[:, 1].max() - mesh.vertices[:, 1].min())
    if height <= 0:
        raise DegenerateGeometryError("mesh has zero vertical extent")
    translation = -centroid
    scale = 1.0 / height
    out = mesh.with_vertices((mesh.vertices + translation) * scale)
    return out, NormalizationRecord(translation=translation, scale=scale)


def denormalize(mesh: Mesh, record: NormalizationRecord) -> Mesh:
    """Inverse of normalize() for the same record."""
    return mesh.with_vertices(mesh.vertices / record.scale - record.translation)
