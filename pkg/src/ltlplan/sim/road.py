"""Road geometry for the two-road intersection world.

Both roads are one-way with two 3 m lanes and cross at right angles in
the middle of a 90 m segment. Every actor lives in its route frame:
x is distance travelled from the route start, y is lateral offset from
the road centerline (positive left), theta is heading relative to the
road. The two route frames are mapped into one world frame for
collision checks and plotting.

Constants the source material leaves open (footprint, wheel-base, stop
region depth, stop threshold, steering clamp) are fixed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

WHEEL_BASE = 2.7
VEHICLE_LENGTH = 4.5
VEHICLE_WIDTH = 2.0
REAR_OVERHANG = 0.9  # rear bumper behind the rear axle
FRONT_EXTENT = VEHICLE_LENGTH - REAR_OVERHANG  # front bumper ahead of the rear axle

PSI_MAX = 0.5
ACCEL_MIN, ACCEL_MAX = -2.0, 2.0
PSI_DOT_MIN, PSI_DOT_MAX = -1.0, 1.0
STOPPED_SPEED = 0.1

SPEED_LIMIT = 11.18  # 25 mph
LANE_WIDTH = 3.0
SEGMENT_LENGTH = 90.0
STOP_REGION_DEPTH = 5.0
DT = 0.1

# Approach ordinals for the N < E < S < W priority tiebreak. Route 0 runs
# eastbound (approaching from the west), route 1 northbound (from the south).
APPROACH_ORDINAL = (3, 2)


@dataclass(frozen=True)
class RoadEnvironment:
    lane_width: float = LANE_WIDTH
    segment_length: float = SEGMENT_LENGTH
    speed_limit: float = SPEED_LIMIT
    stop_region_depth: float = STOP_REGION_DEPTH
    dt: float = DT
    # derived geometry, filled in __post_init__ (plain fields: stepping is hot)
    road_half_width: float = field(init=False, default=0.0)
    center: float = field(init=False, default=0.0)
    intersection_start: float = field(init=False, default=0.0)
    intersection_end: float = field(init=False, default=0.0)
    stop_region_start: float = field(init=False, default=0.0)
    stop_region_end: float = field(init=False, default=0.0)
    stop_region_mid: float = field(init=False, default=0.0)
    stop_target: float = field(init=False, default=0.0)
    lane_centers: tuple = field(init=False, default=(0.0, 0.0))

    def __post_init__(self):
        half = self.lane_width  # two lanes per road
        center = self.segment_length / 2.0
        box_start = center - half
        mid = box_start - self.stop_region_depth / 2.0
        for name, value in (
            ("road_half_width", half),
            ("center", center),
            ("intersection_start", box_start),
            ("intersection_end", center + half),
            ("stop_region_start", box_start - self.stop_region_depth),
            ("stop_region_end", box_start),
            ("stop_region_mid", mid),
            # the stop target leaves the front bumper at the region midpoint
            ("stop_target", mid - FRONT_EXTENT),
            # lane 0 = right lane, lane 1 = left (y positive to the left)
            ("lane_centers", (-self.lane_width / 2.0, self.lane_width / 2.0)),
        ):
            object.__setattr__(self, name, value)

    def lane_center(self, lane: int) -> float:
        return self.lane_centers[lane]

    def lane_of(self, y: float) -> int:
        return 0 if y < 0 else 1

    def to_world(self, route: int, x: float, y: float) -> tuple[float, float]:
        if route == 0:
            return x - self.center, y
        return -y, x - self.center

    def world_heading(self, route: int, theta: float) -> float:
        return theta if route == 0 else theta + math.pi / 2.0

    # matches the braking onset used by the longitudinal halt law, so a
    # vehicle braking for the sign tracks this curve with near-zero error
    REFERENCE_DECEL = 1.2

    def reference_speed(self, x: float, has_stopped: bool,
                        decel: float = REFERENCE_DECEL) -> float:
        """Speed profile along the route: ramps to zero at the stop target
        until the mandatory stop has happened, then the speed limit."""
        if has_stopped:
            return self.speed_limit
        gap = self.stop_target - x
        if gap <= 0.0:
            return 0.0
        return min(self.speed_limit, math.sqrt(2.0 * decel * gap))


def footprint_span(x: float) -> tuple[float, float]:
    """Longitudinal extent of the footprint along the route axis."""
    return x - REAR_OVERHANG, x + FRONT_EXTENT


def spans_overlap(lo1: float, hi1: float, lo2: float, hi2: float) -> bool:
    return lo1 < hi2 and lo2 < hi1
