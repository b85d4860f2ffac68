"""Skeleton-free motion retargeting toolkit with interactive weight editing."""

from .anim import (
    AnimationClip,
    HttpMoCapClient,
    Joint,
    JointEdit,
    JointPose,
    MoCapRequest,
    MoCapResult,
    MockMoCapClient,
    Skeleton,
    apply_joint_edit,
    clip_to_json,
    forward_kinematics,
    mocap_submit,
    parse_clip,
    skin_clip,
)
from .converter import (
    SNAP,
    ConverterConfig,
    EditCommand,
    convert_edit,
    coverage_map,
    idw_weight,
    kde_density,
    scott_bandwidth,
)
from .errors import MotransError
from .mesh import Mesh, NormalizationRecord, denormalize, normalize, parse_obj, serialize_obj
from .pipeline import (
    Project,
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
from .retarget import (
    FitDiagnostics,
    TransferSession,
    apply_to_target,
    fit_part_transforms,
    transfer_clip,
)
from .skinning import (
    PartTransformSet,
    SkinningWeights,
    argmax_label,
    lbs_deform,
    part_vertex_sets,
    renormalize,
    validate_weights,
    weights_from_json,
    weights_to_json,
)

__version__ = "0.1.0"
