"""HTTP/JSON API over the pipeline, consumed by the browser editor.

Mutating requests against one project are serialized through the project
lock; MoTrans runs on a worker thread with a poll/status contract so the
request path stays responsive.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, Form, HTTPException, UploadFile
from fastapi.responses import JSONResponse, PlainTextResponse

from .anim import JointEdit, MoCapRequest, MockMoCapClient, mocap_submit, parse_clip
from .converter import ConverterConfig, EditCommand
from .errors import (
    ContractError,
    DurationLimitError,
    FixtureNotFoundError,
    FormatError,
    MeshValidationError,
    MotransError,
    ObjParseError,
    StageError,
)
from .mesh import parse_obj, serialize_obj
from .pipeline import (
    Project,
    SourceBundle,
    TargetBundle,
    create_project,
    export_results,
    highlight_correspondence,
    label_colors,
    save_project,
)
from .skinning import weights_from_json, weights_to_json


class ProjectRegistry:
    def __init__(self):
        self._projects: dict[str, Project] = {}
        self._jobs: dict[str, dict] = {}
        self._guard = threading.Lock()

    def add(self, project: Project) -> None:
        with self._guard:
            self._projects[project.id] = project
            self._jobs[project.id] = {"status": "idle"}

    def get(self, project_id: str) -> Project:
        with self._guard:
            project = self._projects.get(project_id)
        if project is None:
            raise HTTPException(status_code=404, detail=f"no project {project_id!r}")
        return project

    def job(self, project_id: str) -> dict:
        with self._guard:
            return dict(self._jobs.get(project_id, {"status": "idle"}))

    def set_job(self, project_id: str, **fields) -> None:
        with self._guard:
            self._jobs[project_id] = fields


def _http_error(exc: MotransError) -> HTTPException:
    status = 422 if isinstance(
        exc, (FormatError, MeshValidationError, ObjParseError, ContractError)
    ) else 409 if isinstance(exc, StageError) else 400
    return HTTPException(status_code=status, detail=str(exc))


def create_app(store_dir=None, mocap_fixtures=None, converter_config=None) -> FastAPI:
    app = FastAPI(title="motrans", version="0.1.0")
    registry = ProjectRegistry()
    config = converter_config or ConverterConfig()
    store = Path(store_dir) if store_dir else None

    @app.post("/projects")
    async def post_project(
        source_mesh: UploadFile,
        source_weights: UploadFile,
        target_mesh: UploadFile,
        target_weights: UploadFile,
        clip: UploadFile | None = None,
        video_ref: str | None = Form(default=None),
    ):
        try:
            source = SourceBundle(
                mesh=parse_obj(await source_mesh.read()),
                weights=weights_from_json(await source_weights.read()),
                clip=parse_clip(await clip.read()) if clip is not None else None,
            )
            target = TargetBundle(
                mesh=parse_obj(await target_mesh.read()),
                weights=weights_from_json(await target_weights.read()),
            )
            project = create_project(source, target)
        except MotransError as e:
            raise _http_error(e)
        if video_ref:
            project.video_ref = video_ref
        registry.add(project)
        if store:
            save_project(project, store)
        return {"id": project.id, "stage": project.stage}

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        project = registry.get(project_id)
        clip = project.source.clip
        return {
            "id": project.id,
            "stage": project.stage,
            "part_count": project.source.weights.part_count,
            "frame_count": clip.frame_count if clip else 0,
            "frame_rate": clip.frame_rate if clip else None,
            "source_vertices": project.source.mesh.vertex_count,
            "target_vertices": project.target.mesh.vertex_count,
            "history_length": len(project.history),
        }

    @app.post("/projects/{project_id}/mocap")
    def post_mocap(project_id: str, body: dict):
        project = registry.get(project_id)
        if mocap_fixtures is None:
            raise HTTPException(status_code=503, detail="no MoCap client configured")
        request = MoCapRequest(video_reference=body.get("video", ""),
                               duration_seconds=float(body.get("duration", 0.0)))
        try:
            result = mocap_submit(request, MockMoCapClient(mocap_fixtures))
        except DurationLimitError as e:
            raise HTTPException(status_code=422, detail=str(e))
        except FixtureNotFoundError as e:
            raise HTTPException(status_code=404, detail=str(e))
        with project.lock:
            project.source.mesh = result.rest_mesh
            project.source.weights = result.weights
            project.attach_clip(result.clip)
        return {"stage": project.stage, "frame_count": result.clip.frame_count}

    @app.post("/projects/{project_id}/pose-edits")
    def post_pose_edit(project_id: str, body: dict):
        project = registry.get(project_id)
        try:
            edit = JointEdit.from_json(json.dumps(body))
            with project.lock:
                project.apply_pose_edit(edit)
        except MotransError as e:
            raise _http_error(e)
        return {"history_length": len(project.history)}

    @app.post("/projects/{project_id}/weight-edits")
    def post_weight_edit(project_id: str, body: dict):
        project = registry.get(project_id)
        try:
            command = EditCommand.from_json(json.dumps(body))
            with project.lock:
                project.apply_weight_edit(command, config)
        except MotransError as e:
            raise _http_error(e)
        return {"history_length": len(project.history)}

    @app.post("/projects/{project_id}/motrans")
    def post_motrans(project_id: str):
        project = registry.get(project_id)
        if project.source.clip is None:
            raise HTTPException(status_code=409, detail="no motion clip attached")
        if registry.job(project_id).get("status") == "running":
            return JSONResponse({"status": "running"}, status_code=202)

        def worker():
            try:
                with project.lock:
                    result = project.run_motrans()
                registry.set_job(project_id, status="done",
                                 cache_hit=result.cache_hit,
                                 frame_count=len(result.frames))
            except MotransError as e:
                registry.set_job(project_id, status="error", error=str(e))

        registry.set_job(project_id, status="running")
        threading.Thread(target=worker, daemon=True).start()
        return JSONResponse({"status": "running"}, status_code=202)

    @app.get("/projects/{project_id}/motrans")
    def get_motrans(project_id: str):
        registry.get(project_id)
        return registry.job(project_id)

    @app.get("/projects/{project_id}/frames/{n}")
    def get_frame(project_id: str, n: int, format: str = "obj"):
        project = registry.get(project_id)
        result = project.result
        if result is None:
            raise HTTPException(status_code=409, detail="no results; run motrans first")
        if not 0 <= n < len(result.frames):
            raise HTTPException(status_code=404,
                                detail=f"frame {n} out of range [0, {len(result.frames)})")
        frame = result.frames[n]
        if format == "json":
            return {"frame": n, "positions": frame.vertices.ravel().tolist()}
        return PlainTextResponse(serialize_obj(frame), media_type="text/plain")

    @app.get("/projects/{project_id}/connectivity")
    def get_connectivity(project_id: str):
        project = registry.get(project_id)
        return {"faces": project.target.mesh.faces.ravel().tolist(),
                "positions": project.target.mesh.vertices.ravel().tolist()}

    @app.get("/projects/{project_id}/labels")
    def get_labels(project_id: str):
        project = registry.get(project_id)
        palette, vertex_colors = label_colors(project.target.weights)
        return {
            "palette": {str(k): list(v) for k, v in palette.items()},
            "vertex_colors": [list(c) for c in vertex_colors],
        }

    @app.get("/projects/{project_id}/correspondence/{k}")
    def get_correspondence(project_id: str, k: int):
        project = registry.get(project_id)
        try:
            src, tgt = highlight_correspondence(project, k)
        except MotransError as e:
            raise _http_error(e)
        return {"label": k, "source_vertices": src, "target_vertices": tgt}

    @app.get("/projects/{project_id}/export")
    def get_export(project_id: str):
        project = registry.get(project_id)
        if store is None:
            raise HTTPException(status_code=503, detail="no export store configured")
        try:
            with project.lock:
                manifest = export_results(project, store / project.id / "export")
        except MotransError as e:
            raise _http_error(e)
        return manifest

    return app
