"""coilkin: constant-curvature kinematics, tendon actuation and contact
missions for a spring-backbone continuum robot."""

from .actuation import (
    ServoCommand,
    TendonTrajectory,
    interpolate,
    max_payout,
    servo_to_tendon,
    tendon_to_servo,
)
from .errors import (
    ArmTooLowError,
    CoilkinError,
    ConfigError,
    DegenerateTargetError,
    EmptyCloudError,
    EmptyWorkspaceError,
    InvalidStateError,
    SceneError,
    ServoRangeError,
    UnreachableTargetError,
)
from .geometry import RobotGeometry
from .kinematics import (
    ArcState,
    TendonSet,
    attachment_points,
    fk_point,
    fk_tip,
    fk_transform,
    ik,
    is_rigid_transform,
    target_from_z_theta,
    tendon_lengths,
)
from .perception import (
    ErrorReport,
    FeatureVector,
    HeightMap,
    bubble_aggregate,
    error_stats,
    reconstruct,
    resample_average,
    to_feature,
)
from .scenes import Cube, HeightField, Tube, load_scene, scene_from_dict
from .simulator import (
    ContactCloud,
    ExploreConfig,
    ExploreResult,
    MissionLog,
    PressureSynth,
    ProbeEvent,
    ScanConfig,
    detect_contact,
    explore_tube,
    probe_vertical,
    radial_scan,
    surface_scan,
)
from .workspace import (
    WorkspaceSample,
    sample_workspace,
    workspace_extents,
)

__version__ = "0.1.0"
