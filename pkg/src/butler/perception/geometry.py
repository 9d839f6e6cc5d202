"""Pinhole camera model: pose matrices, unprojection, projection.

Depth images hold camera-frame z. A pixel (u, v) with depth z unprojects to
the camera-frame point (z(u-cx)/fx, z(v-cy)/fy, z), which the inverse camera
pose carries into the reference (world) frame. project() is the exact inverse
and doubles as the test oracle for round-trips.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..world.render import camera_basis


@dataclass(frozen=True)
class CameraIntrinsics:
    fx: float
    fy: float
    cx: float
    cy: float

    @classmethod
    def square(cls, res: int, fov_deg: float = 90.0) -> "CameraIntrinsics":
        f = (res / 2.0) / np.tan(np.deg2rad(fov_deg) / 2.0)
        return cls(fx=f, fy=f, cx=res / 2.0, cy=res / 2.0)


@dataclass
class Pose:
    """World-to-camera rigid transform (the G in the unprojection)."""

    matrix: np.ndarray  # (4, 4)

    @classmethod
    def from_agent(
        cls, x: float, z: float, yaw_deg: float, pitch_deg: float,
        camera_height: float,
    ) -> "Pose":
        basis = camera_basis(yaw_deg, pitch_deg)   # camera axes in world
        eye = np.array([x, camera_height, z])
        g = np.eye(4)
        g[:3, :3] = basis.T
        g[:3, 3] = -basis.T @ eye
        return cls(matrix=g)

    def inverse_matrix(self) -> np.ndarray:
        r = self.matrix[:3, :3]
        t = self.matrix[:3, 3]
        inv = np.eye(4)
        inv[:3, :3] = r.T
        inv[:3, 3] = -r.T @ t
        return inv

    def camera_position(self) -> np.ndarray:
        return self.inverse_matrix()[:3, 3]


def unproject(
    depth: np.ndarray,
    intrinsics: CameraIntrinsics,
    pose: Pose,
    mask: np.ndarray | None = None,
    stride: int = 1,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Depth image to reference-frame points.

    Returns (points (N, 3), us (N,), vs (N,)). A boolean mask restricts which
    pixels unproject; stride subsamples the pixel grid.
    """
    h, w = depth.shape
    vs, us = np.meshgrid(
        np.arange(0, h, stride), np.arange(0, w, stride), indexing="ij"
    )
    us = us.ravel()
    vs = vs.ravel()
    if mask is not None:
        keep = mask[vs, us]
        us, vs = us[keep], vs[keep]
    z = depth[vs, us]
    finite = np.isfinite(z)
    us, vs, z = us[finite], vs[finite], z[finite]
    xc = z * (us - intrinsics.cx) / intrinsics.fx
    yc = z * (vs - intrinsics.cy) / intrinsics.fy
    pcam = np.stack([xc, yc, z, np.ones_like(z)], axis=0)
    pref = pose.inverse_matrix() @ pcam
    return pref[:3].T, us, vs


def project(
    points: np.ndarray, intrinsics: CameraIntrinsics, pose: Pose
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reference-frame points to (u, v, z); inverse of unproject."""
    pts = np.asarray(points, dtype=np.float64)
    hom = np.concatenate([pts, np.ones((len(pts), 1))], axis=1)
    pcam = (pose.matrix @ hom.T)[:3]
    z = pcam[2]
    u = intrinsics.fx * pcam[0] / z + intrinsics.cx
    v = intrinsics.fy * pcam[1] / z + intrinsics.cy
    return u, v, z
