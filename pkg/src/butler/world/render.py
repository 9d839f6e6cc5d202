"""Egocentric rendering by analytic ray casting.

Every surface in the world is an axis-aligned box (walls, floor, ceiling,
object bodies), so depth is computed with the slab method, vectorized over all
pixels per box. Depth values are camera-frame z (distance along the optical
axis), which is exactly what the unprojection consumes.

Pixel (u, v) shoots the ray through ((u - cx)/fx, (v - cy)/fy, 1) in camera
coordinates; u indexes columns, v rows, and the principal point sits at pixel
index R/2 so the center pixel of an even-sized image looks exactly forward.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .state import DetectionMask, SimObject, WorldState

_EPS = 1e-9

BACKGROUND = -1


@dataclass
class RenderFrame:
    depth: np.ndarray                 # (R, R) float64, camera-frame z
    idbuf: np.ndarray                 # (R, R) int32 index into object_ids
    object_ids: list[str]
    rgb: np.ndarray | None = None


def camera_basis(yaw_deg: float, pitch_deg: float) -> np.ndarray:
    """Columns are the world directions of camera x (right), y (down), z
    (forward). Pitch is positive looking down."""
    yaw = np.deg2rad(yaw_deg)
    pitch = np.deg2rad(pitch_deg)
    sy, cy = np.sin(yaw), np.cos(yaw)
    sp, cp = np.sin(pitch), np.cos(pitch)
    right = np.array([-cy, 0.0, sy])
    down = np.array([-sy * sp, -cp, -cy * sp])
    forward = np.array([sy * cp, -sp, cy * cp])
    return np.stack([right, down, forward], axis=1)


def _ray_grid(res: int, basis: np.ndarray):
    f = res / 2.0
    c = res / 2.0
    xs = (np.arange(res) - c) / f          # image x per column
    ys = (np.arange(res) - c) / f          # image y per row
    dx = xs[None, :] * basis[0, 0] + ys[:, None] * basis[0, 1] + basis[0, 2]
    dy = xs[None, :] * basis[1, 0] + ys[:, None] * basis[1, 1] + basis[1, 2]
    dz = xs[None, :] * basis[2, 0] + ys[:, None] * basis[2, 1] + basis[2, 2]
    return dx, dy, dz


def _box_hit(eye, d, bmin, bmax):
    """Entry distance of each ray into the box, inf where it misses."""
    t_near = np.full(d[0].shape, -np.inf)
    t_far = np.full(d[0].shape, np.inf)
    for axis in range(3):
        dd = d[axis]
        safe = np.where(np.abs(dd) < 1e-12, 1e-12, dd)
        t1 = (bmin[axis] - eye[axis]) / safe
        t2 = (bmax[axis] - eye[axis]) / safe
        t_near = np.maximum(t_near, np.minimum(t1, t2))
        t_far = np.minimum(t_far, np.maximum(t1, t2))
    hit = (t_far >= t_near) & (t_near > _EPS)
    return np.where(hit, t_near, np.inf)


def _wall_boxes(world: WorldState) -> list[tuple[np.ndarray, np.ndarray]]:
    c = world.config.cell_m
    h = world.config.ceiling_height
    xmax = world.width * c
    zmax = world.height * c
    thick = 0.5
    boxes = [
        (np.array([-thick, 0.0, -thick]), np.array([0.0, h, zmax + thick])),
        (np.array([xmax, 0.0, -thick]), np.array([xmax + thick, h, zmax + thick])),
        (np.array([-thick, 0.0, -thick]), np.array([xmax + thick, h, 0.0])),
        (np.array([-thick, 0.0, zmax]), np.array([xmax + thick, h, zmax + thick])),
    ]
    # Merge interior wall cells into x-runs per row.
    by_row: dict[int, list[int]] = {}
    for (i, j) in world.walls:
        by_row.setdefault(j, []).append(i)
    for j, cols in sorted(by_row.items()):
        cols.sort()
        run_start = prev = cols[0]
        for i in cols[1:] + [None]:
            if i is not None and i == prev + 1:
                prev = i
                continue
            boxes.append((
                np.array([run_start * c, 0.0, j * c]),
                np.array([(prev + 1) * c, h, (j + 1) * c]),
            ))
            if i is not None:
                run_start = prev = i
    return boxes


def _category_color(category: str) -> np.ndarray:
    digest = hashlib.md5(category.encode()).digest()
    return np.array([64 + digest[0] % 160, 64 + digest[1] % 160,
                     64 + digest[2] % 160], dtype=np.float64)


def render_frame(world: WorldState) -> RenderFrame:
    """Render at the agent's current pose, with a one-entry cache."""
    key = (world.state_version, world.agent.pose_tuple(),
           world.config.camera_res)
    cached = world._render_cache.get(key)
    if cached is not None:
        return cached

    cfg = world.config
    res = cfg.camera_res
    eye = np.array([world.agent.x, cfg.camera_height, world.agent.z])
    basis = camera_basis(world.agent.yaw, world.agent.pitch)
    d = _ray_grid(res, basis)
    dx, dy, dz = d

    depth = np.full((res, res), np.inf)
    idbuf = np.full((res, res), BACKGROUND, dtype=np.int32)
    surf = np.zeros((res, res), dtype=np.int16)  # 0 none, 1 floor, 2 ceil, 3 wall

    with np.errstate(divide="ignore", invalid="ignore"):
        t_floor = np.where(dy < -1e-12, (0.0 - eye[1]) / dy, np.inf)
        t_ceil = np.where(dy > 1e-12, (cfg.ceiling_height - eye[1]) / dy, np.inf)
    closer = t_floor < depth
    depth[closer] = t_floor[closer]
    surf[closer] = 1
    closer = t_ceil < depth
    depth[closer] = t_ceil[closer]
    surf[closer] = 2

    for bmin, bmax in _wall_boxes(world):
        t = _box_hit(eye, d, bmin, bmax)
        closer = t < depth
        depth[closer] = t[closer]
        surf[closer] = 3

    objects = world.visible_objects()
    forward = basis[:, 2]
    object_ids: list[str] = []
    kept: list[SimObject] = []
    for obj in objects:
        half = obj.size / 2.0
        bmin = obj.position - half
        bmax = obj.position + half
        corners = np.array([
            [bx, by, bz]
            for bx in (bmin[0], bmax[0])
            for by in (bmin[1], bmax[1])
            for bz in (bmin[2], bmax[2])
        ])
        if np.all((corners - eye) @ forward < _EPS):
            continue
        object_ids.append(obj.id)
        kept.append(obj)
        t = _box_hit(eye, d, bmin, bmax)
        closer = t < depth
        depth[closer] = t[closer]
        idbuf[closer] = len(object_ids) - 1
        surf[closer] = 0

    rgb = None
    if cfg.render_rgb:
        rgb = np.zeros((res, res, 3), dtype=np.float64)
        rgb[surf == 1] = (40, 40, 48)
        rgb[surf == 2] = (230, 230, 226)
        rgb[surf == 3] = (128, 128, 134)
        for idx, obj in enumerate(kept):
            color = _category_color(obj.category)
            if obj.powered:
                color = np.minimum(color + 60, 255)
            rgb[idbuf == idx] = color
        shade = 1.0 / (1.0 + 0.08 * np.minimum(depth, 50.0))
        rgb = (rgb * shade[:, :, None]).astype(np.uint8)

    frame = RenderFrame(depth=depth, idbuf=idbuf, object_ids=object_ids,
                        rgb=rgb)
    world._render_cache.clear()
    world._render_cache[key] = frame
    return frame


def masks_from_frame(world: WorldState, frame: RenderFrame) -> list[DetectionMask]:
    masks: list[DetectionMask] = []
    for idx, oid in enumerate(frame.object_ids):
        mask = frame.idbuf == idx
        if not mask.any():
            continue
        obj = world.objects[oid]
        masks.append(DetectionMask(object_id=oid, category=obj.category,
                                   mask=mask, score=1.0))
    return masks


def resolve_pixel(world: WorldState, frame: RenderFrame, u: int, v: int) -> SimObject | None:
    res = world.config.camera_res
    if not (0 <= u < res and 0 <= v < res):
        return None
    idx = int(frame.idbuf[v, u])
    if idx < 0:
        return None
    return world.objects[frame.object_ids[idx]]
