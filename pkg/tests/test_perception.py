"""Camera geometry, occupancy mapping, and the object instance memory."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from butler.perception import (
    CameraIntrinsics,
    DefaultAttributeClassifier,
    ObjectMemory,
    OccupancyMap,
    OracleAttributeClassifier,
    Pose,
    median_depth_centroid,
    project,
    unproject,
)
from butler.world import DetectionMask, camera_basis

IDENTITY = Pose(matrix=np.eye(4))


def _single_pixel(res: int, v: int, u: int) -> np.ndarray:
    mask = np.zeros((res, res), dtype=bool)
    mask[v, u] = True
    return mask


# ----------------------------------------------------------- analytic cases

def test_unproject_principal_point():
    intr = CameraIntrinsics.square(4)   # fx = fy = 2, cx = cy = 2
    depth = np.full((4, 4), 1.0)
    pts, us, vs = unproject(depth, intr, IDENTITY, mask=_single_pixel(4, 2, 2))
    assert us.tolist() == [2] and vs.tolist() == [2]
    np.testing.assert_array_equal(pts[0], [0.0, 0.0, 1.0])


def test_unproject_one_focal_length_off_axis():
    intr = CameraIntrinsics.square(4)
    depth = np.full((4, 4), 2.0)
    pts, _, _ = unproject(depth, intr, IDENTITY,
                          mask=_single_pixel(4, 2, 4 - 1))
    # u = cx + fx lands outside a 4px image; use explicit intrinsics instead.
    intr = CameraIntrinsics(fx=2.0, fy=2.0, cx=2.0, cy=2.0)
    depth = np.full((8, 8), 2.0)
    pts, _, _ = unproject(depth, intr, IDENTITY, mask=_single_pixel(8, 2, 4))
    np.testing.assert_array_equal(pts[0], [2.0, 0.0, 2.0])


def test_unproject_translation_shifts_output():
    intr = CameraIntrinsics(fx=2.0, fy=2.0, cx=2.0, cy=2.0)
    depth = np.full((8, 8), 1.5)
    mask = _single_pixel(8, 1, 3)
    base, _, _ = unproject(depth, intr, IDENTITY, mask=mask)
    t = np.array([0.3, -1.2, 2.5])
    g = np.eye(4)
    g[:3, 3] = t
    shifted, _, _ = unproject(depth, intr, Pose(matrix=g), mask=mask)
    np.testing.assert_array_equal(shifted[0], base[0] - t)


def test_unproject_mask_and_stride():
    intr = CameraIntrinsics.square(6)
    depth = np.full((6, 6), 1.0)
    pts, us, vs = unproject(depth, intr, IDENTITY, stride=2)
    assert len(pts) == 9
    assert sorted(set(us.tolist())) == [0, 2, 4]
    assert sorted(set(vs.tolist())) == [0, 2, 4]
    depth[1, 1] = np.inf
    mask = np.zeros((6, 6), dtype=bool)
    mask[1, 1] = True
    mask[3, 3] = True
    pts, us, vs = unproject(depth, intr, IDENTITY, mask=mask)
    assert us.tolist() == [3] and vs.tolist() == [3]


# --------------------------------------------------------------- pose math

def test_pose_from_agent_camera_position():
    pose = Pose.from_agent(1.25, 0.75, yaw_deg=90, pitch_deg=30,
                           camera_height=0.9015)
    np.testing.assert_allclose(pose.camera_position(), [1.25, 0.9015, 0.75],
                               atol=1e-12)
    np.testing.assert_allclose(pose.inverse_matrix() @ pose.matrix, np.eye(4),
                               atol=1e-12)


def test_camera_basis_conventions():
    level = camera_basis(0, 0)
    np.testing.assert_allclose(level[:, 2], [0, 0, 1], atol=1e-12)
    np.testing.assert_allclose(level[:, 1], [0, -1, 0], atol=1e-12)
    east = camera_basis(90, 0)
    np.testing.assert_allclose(east[:, 2], [1, 0, 0], atol=1e-12)
    tilted = camera_basis(0, 30)
    np.testing.assert_allclose(tilted[:, 2], [0, -0.5, np.cos(np.deg2rad(30))],
                               atol=1e-12)
    # Orthonormal for every pose.
    for yaw in (0, 90, 180, 270):
        for pitch in (-60, -30, 0, 30, 60):
            b = camera_basis(yaw, pitch)
            np.testing.assert_allclose(b.T @ b, np.eye(3), atol=1e-12)


@settings(max_examples=150, deadline=None)
@given(
    x=st.floats(0, 5), z=st.floats(0, 5),
    yaw=st.sampled_from([0, 90, 180, 270]),
    pitch=st.sampled_from([-60, -30, 0, 30, 60]),
    u=st.integers(0, 31), v=st.integers(0, 31),
    depth_val=st.floats(0.1, 10.0),
)
def test_unproject_project_round_trip_property(x, z, yaw, pitch, u, v,
                                               depth_val):
    intr = CameraIntrinsics.square(32)
    pose = Pose.from_agent(x, z, yaw, pitch, camera_height=0.9015)
    depth = np.full((32, 32), depth_val)
    pts, us, vs = unproject(depth, intr, pose, mask=_single_pixel(32, v, u))
    u2, v2, z2 = project(pts, intr, pose)
    assert abs(u2[0] - u) < 1e-9
    assert abs(v2[0] - v) < 1e-9
    assert abs(z2[0] - depth_val) < 1e-9


# ------------------------------------------------------------ occupancy map

def test_map_bins_floor_obstacle_ceiling():
    m = OccupancyMap(1.0, 1.0)
    x, z = 0.525, 0.525          # cell (10, 10) at 0.05 m resolution
    pts = np.array([
        [x, 0.01, z],            # floor
        [x, 0.04, z],            # floor
        [x, 0.2, z],             # obstacle band 1
        [x, 0.5, z],             # obstacle band 2
        [x, 1.5, z],             # obstacle band 3
        [x, 2.0, z],             # above all bands: ignored
        [x, 2.6, z],             # ceiling: ignored
    ])
    m.update(pts)
    assert m.floor_count[10, 10] == 2
    assert m.obstacle_count[10, 10] == 3
    assert m.observed_count[10, 10] == 5
    assert m.obstacle[10, 10]
    assert m.explored[10, 10]    # 5 >= threshold 3


def test_map_explored_threshold_and_forced_free():
    m = OccupancyMap(1.0, 1.0)
    pts = np.array([[0.125, 0.01, 0.125]] * 2)
    m.update(pts)
    assert not m.explored[2, 2]
    m.mark_agent_cell(0.125, 0.125)
    assert m.explored[2, 2]
    assert m.free[2, 2]


def test_map_drops_out_of_bounds_points():
    m = OccupancyMap(1.0, 1.0)
    m.update(np.array([[-0.1, 0.2, 0.5], [0.5, 0.2, 1.7], [0.5, 0.2, 0.5]]))
    assert m.dropped_points == 2
    assert m.obstacle_count.sum() == 1


def test_map_nav_grids_pool_by_step():
    m = OccupancyMap(1.0, 1.0)      # 20x20 fine cells, 4x4 step cells
    # Fully explore one step cell with floor hits, then poison one fine cell.
    xs = []
    for i in range(5):
        for j in range(5):
            xs += [[0.25 + i * 0.05 + 0.01, 0.01, 0.25 + j * 0.05 + 0.01]] * 3
    m.update(np.array(xs))
    trav, expl = m.nav_grids(0.25)
    assert trav.shape == (4, 4)
    assert expl[1, 1] and trav[1, 1]
    m.update(np.array([[0.3, 0.5, 0.3]] * 1))
    trav, _ = m.nav_grids(0.25)
    assert not trav[1, 1]


def test_map_mark_blocked_overrides_free():
    m = OccupancyMap(1.0, 1.0)
    m.mark_agent_cell(0.375, 0.375)
    trav, _ = m.nav_grids(0.25)
    assert trav[1, 1]
    m.mark_blocked(0.375, 0.375)
    trav, _ = m.nav_grids(0.25)
    assert not trav[1, 1]


def test_map_snapshot_rle_round_trips():
    m = OccupancyMap(0.5, 0.5)
    m.update(np.array([[0.225, 0.5, 0.225]]))
    m.update(np.array([[0.325, 0.01, 0.225]] * 3))
    snap = m.snapshot()
    assert snap["cell_m"] == m.cell_m
    assert snap["nx"] == m.nx and snap["nz"] == m.nz

    def decode(runs: list, nx: int, nz: int) -> np.ndarray:
        flat = np.zeros(nx * nz, dtype=bool)
        for start, length in runs:
            flat[start:start + length] = True
        return flat.reshape(nz, nx).T

    np.testing.assert_array_equal(
        decode(snap["obstacle_runs"], m.nx, m.nz), m.obstacle)
    np.testing.assert_array_equal(
        decode(snap["explored_runs"], m.nx, m.nz), m.explored)


# ------------------------------------------------------------ object memory

_INTR = CameraIntrinsics.square(8)


def _det(object_id, category, pixels, res=8, score=1.0):
    mask = np.zeros((res, res), dtype=bool)
    for v, u in pixels:
        mask[v, u] = True
    return DetectionMask(object_id=object_id, category=category, mask=mask,
                         score=score)


def _flat_depth(value: float, res: int = 8) -> np.ndarray:
    return np.full((res, res), value)


def test_median_depth_centroid_picks_median_pixel():
    mask = np.zeros((8, 8), dtype=bool)
    depth = _flat_depth(1.0)
    for (v, u), d in (((1, 1), 1.0), ((2, 2), 2.0), ((3, 3), 9.0)):
        mask[v, u] = True
        depth[v, u] = d
    got = median_depth_centroid(mask, depth, _INTR, IDENTITY)
    want, _, _ = unproject(depth, _INTR, IDENTITY, mask=_single_pixel(8, 2, 2))
    np.testing.assert_array_equal(got, want[0])


def test_median_depth_centroid_empty_or_infinite():
    depth = np.full((8, 8), np.inf)
    assert median_depth_centroid(np.zeros((8, 8), bool), depth, _INTR,
                                 IDENTITY) is None
    mask = _single_pixel(8, 2, 2)
    assert median_depth_centroid(mask, depth, _INTR, IDENTITY) is None


def test_memory_identity_match_beats_distance():
    mem = ObjectMemory()
    depth = _flat_depth(1.0)
    (first,) = mem.update([_det("mug_1", "Mug", [(4, 4)])], depth, _INTR,
                          IDENTITY)
    moved = mem.update([_det("mug_1", "Mug", [(1, 1)])], _flat_depth(3.0),
                       _INTR, IDENTITY)
    assert moved == [first]
    assert len(mem.instances) == 1

    # A different sim id stays separate even at the same spot.
    (second,) = mem.update([_det("mug_2", "Mug", [(4, 4)])], depth, _INTR,
                           IDENTITY)
    assert second is not first
    assert len(mem.instances) == 2


def test_memory_anonymous_merge_radius():
    mem = ObjectMemory()
    (first,) = mem.update([_det(None, "Mug", [(4, 4)])], _flat_depth(1.0),
                          _INTR, IDENTITY)
    near = mem.update([_det(None, "Mug", [(4, 4)])], _flat_depth(1.3),
                      _INTR, IDENTITY)
    assert near == [first]      # merged, centroid refreshed to depth 1.3
    far = mem.update([_det(None, "Mug", [(4, 4)])], _flat_depth(1.9),
                     _INTR, IDENTITY)
    assert far != [first]
    assert len(mem.instances) == 2
    # Category must match for an anonymous merge.
    other = mem.update([_det(None, "Cup", [(4, 4)])], _flat_depth(1.0),
                       _INTR, IDENTITY)
    assert len(mem.instances) == 3
    assert other[0].label == "Cup"


def test_memory_find_orderings_and_drop():
    mem = ObjectMemory()
    a = mem.update([_det("a", "Mug", [(4, 4)], score=0.4)], _flat_depth(1.0),
                   _INTR, IDENTITY)[0]
    b = mem.update([_det("b", "Mug", [(4, 4)], score=0.9)], _flat_depth(2.0),
                   _INTR, IDENTITY)[0]
    anchor = np.array(a.attributes["centroid location"])
    assert mem.find("Mug", near=anchor) == [a, b]
    assert mem.find("Mug", near=anchor, radius=0.5) == [a]
    assert mem.find("Mug") == [b, a]            # score order without anchor
    assert mem.find("Mug", exclude={a.instance_id}) == [b]
    mem.drop(b)
    assert mem.find("Mug") == [a]


def test_memory_keeps_best_score():
    mem = ObjectMemory()
    (inst,) = mem.update([_det("a", "Mug", [(4, 4)], score=0.9)],
                         _flat_depth(1.0), _INTR, IDENTITY)
    mem.update([_det("a", "Mug", [(4, 4)], score=0.3)], _flat_depth(1.0),
               _INTR, IDENTITY)
    assert inst.score == pytest.approx(0.9)


def test_attribute_classifiers():
    default = DefaultAttributeClassifier()
    assert default.classify("TomatoSliced", None)["sliced"]
    assert not default.classify("Tomato", None)["sliced"]
    assert default.classify("Mug", None)["clean"]

    class FakeWorld:
        def __init__(self):
            from butler.world import SimObject
            self.objects = {"mug": SimObject(
                "mug", "Mug", np.zeros(3), np.ones(3), clean=False,
                cooked=True)}

    oracle = OracleAttributeClassifier(FakeWorld())
    attrs = oracle.classify("Mug", "mug")
    assert attrs["clean"] is False and attrs["cooked"] is True
    fallback = oracle.classify("Mug", "missing")
    assert fallback["clean"] is True
