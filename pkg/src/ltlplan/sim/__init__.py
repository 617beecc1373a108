from .road import (
    ACCEL_MAX,
    ACCEL_MIN,
    APPROACH_ORDINAL,
    DT,
    FRONT_EXTENT,
    LANE_WIDTH,
    PSI_DOT_MAX,
    PSI_DOT_MIN,
    PSI_MAX,
    REAR_OVERHANG,
    RoadEnvironment,
    SEGMENT_LENGTH,
    SPEED_LIMIT,
    STOPPED_SPEED,
    VEHICLE_LENGTH,
    VEHICLE_WIDTH,
    WHEEL_BASE,
    footprint_span,
)
from .scenario import (
    PlacementInfeasible,
    ScenarioConfig,
    TraceWriter,
    agent_labels_from_trace,
    load_scenario,
    read_trace,
    save_scenario,
    spawn_scenario,
)
from .scripted import find_leader, scripted_actor_control
from .vehicle import VehicleState, footprint_corners, rectangles_overlap, step_vehicle
from .engine import advance_world, step_world_inplace
from .world import (
    ALPHABET,
    AP_ORDER,
    ActorState,
    Policy,
    Status,
    WorldState,
    higher_priority,
    intersection_is_clear,
    label,
    label_bitmask,
    reference_speed_for,
    refresh_zone_state,
)
