import colorsys
import json

import numpy as np
import pytest

from motrans.anim import JointEdit
from motrans.converter import EditCommand
from motrans.errors import ContractError, MeshValidationError, StageError
from motrans.fixtures import (
    PART_RIGHT_ARM,
    make_fixture_project,
)
from motrans.pipeline import (
    SourceBundle,
    TargetBundle,
    create_project,
    export_results,
    highlight_correspondence,
    label_colors,
    load_project,
    replay_history,
    save_project,
)
from motrans.skinning import SkinningWeights, part_vertex_sets
from motrans import quat


@pytest.fixture()
def fixture_bundles():
    fx = make_fixture_project()
    source = SourceBundle(mesh=fx["source_mesh"], weights=fx["source_weights"],
                          clip=fx["clip"])
    target = TargetBundle(mesh=fx["target_mesh"], weights=fx["target_weights"])
    return fx, source, target


class TestCreateProject:
    def test_valid_fixture(self, fixture_bundles):
        _, source, target = fixture_bundles
        project = create_project(source, target)
        assert project.stage == "motrans"  # clip provided at creation
        assert len(project.id) == 12

    def test_stage_without_clip(self, fixture_bundles):
        _, source, target = fixture_bundles
        source.clip = None
        assert create_project(source, target).stage == "mocap"

    def test_bad_weight_row_named(self, fixture_bundles):
        _, source, target = fixture_bundles
        w = np.array(target.weights.weights)
        w[3] = [0.7, 0.7, 0.0, 0.0]
        target.weights = SkinningWeights(weights=w)
        with pytest.raises(MeshValidationError, match="row 3"):
            create_project(source, target)

    def test_part_count_mismatch(self, fixture_bundles):
        _, source, target = fixture_bundles
        target.weights = SkinningWeights(
            weights=np.ones((target.mesh.vertex_count, 1)))
        with pytest.raises(MeshValidationError, match="part count"):
            create_project(source, target)


class TestRunMotrans:
    def test_frame_counts(self, fixture_bundles):
        fx, source, target = fixture_bundles
        project = create_project(source, target)
        result = project.run_motrans()
        assert len(result.frames) == fx["clip"].frame_count
        assert not result.cache_hit
        assert project.stage == "results"

    def test_cache_hit_on_rerun(self, fixture_bundles):
        _, source, target = fixture_bundles
        project = create_project(source, target)
        first = project.run_motrans()
        second = project.run_motrans()
        assert second.cache_hit
        assert second.frames is first.frames

    def test_weight_edit_invalidates_cache(self, fixture_bundles):
        fx, source, target = fixture_bundles
        project = create_project(source, target)
        first = project.run_motrans()
        project.apply_weight_edit(fx["fix_command"])
        second = project.run_motrans()
        assert not second.cache_hit
        # only vertices of the parts touched by the edit (the target part and
        # the part the vertices left) may change trajectory
        edited = sorted(fx["fix_command"].vertex_ids)
        labels = np.argmax(fx["target_weights"].weights, axis=1)
        affected_parts = {fx["fix_command"].target_label} | {int(labels[v]) for v in edited}
        unaffected = [v for v in range(target.mesh.vertex_count)
                      if int(labels[v]) not in affected_parts]
        changed = False
        for a, b in zip(first.frames, second.frames):
            assert np.abs(a.vertices[unaffected] - b.vertices[unaffected]).max() < 1e-12
            if np.abs(a.vertices[edited] - b.vertices[edited]).max() > 1e-9:
                changed = True
        assert changed

    def test_pose_edit_invalidates_cache(self, fixture_bundles):
        _, source, target = fixture_bundles
        project = create_project(source, target)
        project.run_motrans()
        project.apply_pose_edit(JointEdit(frame_index=2, joint_index=1,
                                          rotation_delta=quat.from_axis_angle((0, 0, 1), 0.3),
                                          translation_delta=np.zeros(3)))
        assert not project.run_motrans().cache_hit

    def test_requires_clip(self, fixture_bundles):
        _, source, target = fixture_bundles
        source.clip = None
        project = create_project(source, target)
        with pytest.raises(StageError):
            project.run_motrans()


class TestLabelColors:
    def test_label_zero_is_red(self):
        w = SkinningWeights(weights=np.eye(3))
        palette, _ = label_colors(w)
        assert palette[0] == (255, 0, 0)  # hue 0

    def test_deterministic(self):
        w = SkinningWeights(weights=np.eye(5))
        assert label_colors(w) == label_colors(w)

    def test_golden_ratio_hue_formula(self):
        w = SkinningWeights(weights=np.eye(7))
        palette, _ = label_colors(w)
        for k in range(7):
            hue = (k * 0.618033988749895) % 1.0
            r, g, b = colorsys.hsv_to_rgb(hue, 1.0, 1.0)
            assert palette[k] == (round(r * 255), round(g * 255), round(b * 255))

    def test_forty_labels_distinct(self):
        w = SkinningWeights(weights=np.eye(40))
        palette, _ = label_colors(w)
        assert len(set(palette.values())) == 40
        hues = sorted((k * 0.618033988749895) % 1.0 for k in range(40))
        gaps = [b - a for a, b in zip(hues, hues[1:])]
        assert min(gaps) > 1 / 80

    def test_vertex_colors_follow_argmax(self):
        w = SkinningWeights(weights=[[0.9, 0.1], [0.2, 0.8]])
        palette, colors = label_colors(w)
        assert colors == [palette[0], palette[1]]


class TestHighlightCorrespondence:
    def test_covered_both_sides(self, fixture_bundles):
        _, source, target = fixture_bundles
        project = create_project(source, target)
        src, tgt = highlight_correspondence(project, 0)
        assert src == part_vertex_sets(source.weights)[0]
        assert tgt == part_vertex_sets(target.weights)[0]

    def test_uncovered_side_empty(self, fixture_bundles):
        _, source, target = fixture_bundles
        # push every target part-1 vertex onto part 0
        w = np.array(target.weights.weights)
        w[w[:, 1] == 1.0] = [1.0, 0.0, 0.0, 0.0]
        target.weights = SkinningWeights(weights=w)
        project = create_project(source, target)
        src, tgt = highlight_correspondence(project, 1)
        assert src and tgt == []

    def test_out_of_range_label(self, fixture_bundles):
        _, source, target = fixture_bundles
        project = create_project(source, target)
        with pytest.raises(ContractError):
            highlight_correspondence(project, 99)


class TestExportAndReplay:
    def test_export_manifest(self, fixture_bundles, tmp_path):
        _, source, target = fixture_bundles
        project = create_project(source, target)
        project.run_motrans()
        manifest = export_results(project, tmp_path / "out")
        assert manifest["frame_count"] == 10
        files = sorted((tmp_path / "out").glob("frame_*.obj"))
        assert len(files) == 10
        import hashlib

        for f, h in zip(files, manifest["frame_hashes"]):
            assert hashlib.sha256(f.read_bytes()).hexdigest() == h
        assert (tmp_path / "out" / "diagnostics.json").exists()

    def test_double_export_byte_identical(self, fixture_bundles, tmp_path):
        _, source, target = fixture_bundles
        project = create_project(source, target)
        project.run_motrans()
        export_results(project, tmp_path / "a")
        export_results(project, tmp_path / "b")
        for fa in sorted((tmp_path / "a").iterdir()):
            fb = tmp_path / "b" / fa.name
            assert fa.read_bytes() == fb.read_bytes()

    def test_export_requires_results(self, fixture_bundles, tmp_path):
        _, source, target = fixture_bundles
        project = create_project(source, target)
        with pytest.raises(StageError):
            export_results(project, tmp_path)

    def test_replay_reproduces_exports(self, fixture_bundles, tmp_path):
        fx, source, target = fixture_bundles
        project = create_project(source, target)
        project.apply_weight_edit(fx["fix_command"])
        project.apply_pose_edit(JointEdit(frame_index=1, joint_index=2,
                                          rotation_delta=quat.from_axis_angle((1, 0, 0), 0.2),
                                          translation_delta=[0, 0.05, 0]))
        project.run_motrans()
        export_results(project, tmp_path / "orig")

        fx2 = make_fixture_project()
        fresh = create_project(
            SourceBundle(mesh=fx2["source_mesh"], weights=fx2["source_weights"],
                         clip=fx2["clip"]),
            TargetBundle(mesh=fx2["target_mesh"], weights=fx2["target_weights"]),
        )
        replay_history(fresh, project.history)
        fresh.run_motrans()
        export_results(fresh, tmp_path / "replay")
        for fa in sorted((tmp_path / "orig").glob("frame_*.obj")):
            fb = tmp_path / "replay" / fa.name
            assert fa.read_bytes() == fb.read_bytes()

    def test_save_load_round_trip(self, fixture_bundles, tmp_path):
        fx, source, target = fixture_bundles
        project = create_project(source, target)
        project.apply_weight_edit(fx["fix_command"])
        pdir = save_project(project, tmp_path)
        again = load_project(pdir)
        assert again.id == project.id
        assert len(again.history) == 1
        assert np.abs(again.target.weights.weights -
                      project.target.weights.weights).max() < 1e-9

    def test_history_is_append_only_record(self, fixture_bundles):
        fx, source, target = fixture_bundles
        project = create_project(source, target)
        project.apply_weight_edit(fx["fix_command"])
        entry = project.history[0]
        assert entry["type"] == "weight-edit"
        assert entry["payload"]["label"] == PART_RIGHT_ARM
        assert "timestamp" in entry
