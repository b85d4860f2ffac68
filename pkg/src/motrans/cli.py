"""Command-line interface mirroring the HTTP API for headless batch runs."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .anim import JointEdit, MoCapRequest, MockMoCapClient, clip_to_json, mocap_submit, parse_clip
from .converter import ConverterConfig, EditCommand
from .errors import MotransError
from .fixtures import write_fixture_tree
from .mesh import parse_obj, serialize_obj
from .pipeline import (
    SourceBundle,
    TargetBundle,
    create_project,
    export_results,
    highlight_correspondence,
    label_colors,
    load_project,
    save_project,
)
from .retarget import TransferSession, transfer_clip
from .skinning import weights_from_json, weights_to_json


@click.group()
def main():
    """Skeleton-free motion retargeting toolkit."""


def _die(exc: MotransError):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _converter_options(f):
    f = click.option("--idw-power", type=float, default=1.0, show_default=True,
                     help="inverse-distance power p")(f)
    f = click.option("--bandwidth-floor", type=float, default=1e-3, show_default=True,
                     help="KDE bandwidth floor, as a fraction of the bbox diagonal")(f)
    return f


@main.command()
@click.option("--source-rest", required=True, type=click.Path(exists=True))
@click.option("--source-clip", "source_clip_dir", required=True,
              type=click.Path(exists=True, file_okay=False),
              help="directory of posed source OBJ frames")
@click.option("--source-weights", required=True, type=click.Path(exists=True))
@click.option("--target", "target_mesh_path", required=True, type=click.Path(exists=True))
@click.option("--target-weights", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
def retarget(source_rest, source_clip_dir, source_weights, target_mesh_path,
             target_weights, out_dir):
    """Transfer a posed OBJ frame sequence onto the target character."""
    try:
        session = TransferSession.create(
            source_rest=parse_obj(Path(source_rest).read_text()),
            target_rest=parse_obj(Path(target_mesh_path).read_text()),
            source_weights=weights_from_json(Path(source_weights).read_text()),
            target_weights=weights_from_json(Path(target_weights).read_text()),
        )
        frame_paths = sorted(Path(source_clip_dir).glob("*.obj"))
        if not frame_paths:
            raise click.ClickException(f"no .obj frames in {source_clip_dir}")
        frames = [parse_obj(p.read_text()) for p in frame_paths]
        out_frames, diags = transfer_clip(session, frames, collect_diagnostics=True)
    except MotransError as e:
        _die(e)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(out_frames):
        (out / f"frame_{i:04d}.obj").write_text(serialize_obj(frame))
    (out / "diagnostics.json").write_text(json.dumps(
        {"frames": [d.to_dict() for d in diags]}, indent=2, sort_keys=True))
    click.echo(f"wrote {len(out_frames)} frames to {out}")


@main.command("create-project")
@click.option("--source-mesh", required=True, type=click.Path(exists=True))
@click.option("--source-weights", required=True, type=click.Path(exists=True))
@click.option("--clip", type=click.Path(exists=True))
@click.option("--target-mesh", required=True, type=click.Path(exists=True))
@click.option("--target-weights", required=True, type=click.Path(exists=True))
@click.option("--store", required=True, type=click.Path())
def create_project_cmd(source_mesh, source_weights, clip, target_mesh,
                       target_weights, store):
    """Validate bundles and persist a new project directory."""
    try:
        source = SourceBundle(
            mesh=parse_obj(Path(source_mesh).read_text()),
            weights=weights_from_json(Path(source_weights).read_text()),
            clip=parse_clip(Path(clip).read_text()) if clip else None,
        )
        target = TargetBundle(
            mesh=parse_obj(Path(target_mesh).read_text()),
            weights=weights_from_json(Path(target_weights).read_text()),
        )
        project = create_project(source, target)
        pdir = save_project(project, store)
    except MotransError as e:
        _die(e)
    click.echo(f"project {project.id} at {pdir} (stage: {project.stage})")


@main.command("weight-edit")
@click.option("--project-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--command", "command_path", required=True, type=click.Path(exists=True),
              help='edit command JSON: {"vertices": [...], "label": k}')
@_converter_options
def weight_edit(project_dir, command_path, idw_power, bandwidth_floor):
    """Apply one weight-editor command to the project's target weights."""
    try:
        project = load_project(project_dir)
        command = EditCommand.from_json(Path(command_path).read_text())
        config = ConverterConfig(idw_power=idw_power, bandwidth_floor=bandwidth_floor)
        project.apply_weight_edit(command, config)
        save_project(project, Path(project_dir).parent)
    except MotransError as e:
        _die(e)
    click.echo(f"edited {len(command.vertex_ids)} vertices -> label {command.target_label}")


@main.command("pose-edit")
@click.option("--project-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--edit", "edit_path", required=True, type=click.Path(exists=True),
              help='joint edit JSON: {"frame": i, "joint": j, "rot": [...], "trans": [...]}')
def pose_edit(project_dir, edit_path):
    """Apply one 6-DoF joint edit to the project's clip."""
    try:
        project = load_project(project_dir)
        edit = JointEdit.from_json(Path(edit_path).read_text())
        project.apply_pose_edit(edit)
        save_project(project, Path(project_dir).parent)
    except MotransError as e:
        _die(e)
    click.echo(f"edited frame {edit.frame_index} joint {edit.joint_index}")


@main.command()
@click.option("--project-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out", "out_dir", required=True, type=click.Path())
def motrans(project_dir, out_dir):
    """Run the motion transfer and export the frame sequence."""
    try:
        project = load_project(project_dir)
        result = project.run_motrans()
        manifest = export_results(project, out_dir)
        save_project(project, Path(project_dir).parent)
    except MotransError as e:
        _die(e)
    click.echo(f"{manifest['frame_count']} frames exported to {out_dir} "
               f"(cache {'hit' if result.cache_hit else 'miss'})")


@main.command()
@click.option("--weights", "weights_path", required=True, type=click.Path(exists=True))
def labels(weights_path):
    """Print the label palette and per-vertex colors for a weights file."""
    try:
        weights = weights_from_json(Path(weights_path).read_text())
    except MotransError as e:
        _die(e)
    palette, vertex_colors = label_colors(weights)
    click.echo(json.dumps({
        "palette": {str(k): list(v) for k, v in palette.items()},
        "vertex_colors": [list(c) for c in vertex_colors],
    }))


@main.command()
@click.option("--project-dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.argument("label", type=int)
def correspondence(project_dir, label):
    """Show source/target vertex sets assigned to LABEL."""
    try:
        project = load_project(project_dir)
        src, tgt = highlight_correspondence(project, label)
    except MotransError as e:
        _die(e)
    click.echo(json.dumps({"label": label, "source_vertices": src,
                           "target_vertices": tgt}))


@main.command()
@click.option("--video", required=True, help="video reference / fixture key")
@click.option("--duration", type=float, required=True, help="clip duration in seconds")
@click.option("--mocap-fixtures", type=click.Path(exists=True, file_okay=False),
              help="local fixture directory (mock client)")
@click.option("--mocap-endpoint", help="HTTP MoCap service base URL")
@click.option("--out", "out_dir", required=True, type=click.Path())
def mocap(video, duration, mocap_fixtures, mocap_endpoint, out_dir):
    """Submit a MoCap request and save the returned bundle."""
    try:
        if mocap_fixtures:
            client = MockMoCapClient(mocap_fixtures)
        elif mocap_endpoint:
            from .anim import HttpMoCapClient
            client = HttpMoCapClient(mocap_endpoint)
        else:
            raise click.ClickException("pass --mocap-fixtures or --mocap-endpoint")
        result = mocap_submit(MoCapRequest(video_reference=video,
                                           duration_seconds=duration), client)
    except MotransError as e:
        _die(e)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "clip.json").write_text(clip_to_json(result.clip))
    (out / "mesh.obj").write_text(serialize_obj(result.rest_mesh))
    (out / "weights.json").write_text(weights_to_json(result.weights))
    click.echo(f"MoCap bundle ({result.clip.frame_count} frames) saved to {out}")


@main.command("make-fixtures")
@click.argument("out_dir", type=click.Path())
def make_fixtures(out_dir):
    """Write the bundled demo character fixtures."""
    root = write_fixture_tree(out_dir)
    click.echo(f"fixtures written to {root}")


@main.command()
@click.option("--store", required=True, type=click.Path())
@click.option("--mocap-fixtures", type=click.Path(exists=True, file_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@_converter_options
def serve(store, mocap_fixtures, host, port, idw_power, bandwidth_floor):
    """Run the HTTP API server."""
    import uvicorn

    from .service import create_app

    app = create_app(store_dir=store, mocap_fixtures=mocap_fixtures,
                     converter_config=ConverterConfig(idw_power=idw_power,
                                                      bandwidth_floor=bandwidth_floor))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
