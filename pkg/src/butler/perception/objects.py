"""Object instance memory.

Each detection contributes a 3D centroid (the unprojected pixel at the median
depth within its mask). Detections that carry a mask id re-associate by that
id; anonymous detections of the same category within the merge radius are
deduplicated, keeping the higher detection score. Re-observations refresh the
centroid. Attributes live in a flat dict whose keys are fixed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from ..dsl import SLICE_PARENT
from ..world.state import DetectionMask
from .geometry import CameraIntrinsics, Pose, unproject

ATTRIBUTE_KEYS = (
    "category label", "centroid location", "holding", "detection score",
    "can use", "sliced", "toasted", "clean", "cooked",
)

MERGE_DIST = 0.5


@dataclass
class ObjectInstance:
    instance_id: int
    attributes: dict
    sim_id: str | None = None
    attribute_source: str = "default"

    @property
    def label(self) -> str:
        return self.attributes["category label"]

    @property
    def centroid(self) -> np.ndarray:
        return np.asarray(self.attributes["centroid location"])

    @centroid.setter
    def centroid(self, value: np.ndarray) -> None:
        self.attributes["centroid location"] = [float(v) for v in value]

    @property
    def score(self) -> float:
        return self.attributes["detection score"]


class AttributeClassifier(Protocol):
    def classify(self, label: str, sim_id: str | None) -> dict: ...


class DefaultAttributeClassifier:
    """Neutral profile when no attribute model is wired in: things are
    assumed clean, usable, and in their base state."""

    source = "default"

    def classify(self, label: str, sim_id: str | None) -> dict:
        return {
            "can use": True,
            "sliced": label in SLICE_PARENT,
            "toasted": False,
            "clean": True,
            "cooked": False,
        }


class OracleAttributeClassifier:
    """Reads attribute ground truth out of the simulator state; the stand-in
    for a visual attribute model."""

    source = "oracle"

    def __init__(self, world):
        self.world = world

    def classify(self, label: str, sim_id: str | None) -> dict:
        obj = self.world.objects.get(sim_id) if sim_id else None
        if obj is None:
            return DefaultAttributeClassifier().classify(label, sim_id)
        return {
            "can use": True,
            "sliced": obj.sliced,
            "toasted": obj.toasted,
            "clean": obj.clean,
            "cooked": obj.cooked,
        }


def median_depth_centroid(
    det_mask: np.ndarray,
    depth: np.ndarray,
    intrinsics: CameraIntrinsics,
    pose: Pose,
) -> np.ndarray | None:
    """World point of the mask pixel whose depth is nearest the median."""
    vs, us = np.nonzero(det_mask)
    if len(us) == 0:
        return None
    zs = depth[vs, us]
    finite = np.isfinite(zs)
    if not finite.any():
        return None
    us, vs, zs = us[finite], vs[finite], zs[finite]
    med = np.median(zs)
    pick = int(np.argmin(np.abs(zs - med)))
    one = np.zeros_like(det_mask)
    one[vs[pick], us[pick]] = True
    pts, _, _ = unproject(depth, intrinsics, pose, mask=one)
    return pts[0]


class ObjectMemory:
    def __init__(
        self,
        classifier: AttributeClassifier | None = None,
        merge_dist: float = MERGE_DIST,
    ):
        self.instances: list[ObjectInstance] = []
        self.classifier = classifier or DefaultAttributeClassifier()
        self.merge_dist = merge_dist
        self._next_id = 1

    def _new_instance(
        self, label: str, centroid: np.ndarray, score: float,
        sim_id: str | None,
    ) -> ObjectInstance:
        attrs = {
            "category label": label,
            "centroid location": [float(v) for v in centroid],
            "holding": False,
            "detection score": float(score),
        }
        attrs.update(self.classifier.classify(label, sim_id))
        inst = ObjectInstance(
            instance_id=self._next_id,
            attributes=attrs,
            sim_id=sim_id,
            attribute_source=getattr(self.classifier, "source", "default"),
        )
        self._next_id += 1
        self.instances.append(inst)
        return inst

    def update(
        self,
        detections: list[DetectionMask],
        depth: np.ndarray,
        intrinsics: CameraIntrinsics,
        pose: Pose,
    ) -> list[ObjectInstance]:
        """Fold one frame of detections into memory; returns touched
        instances."""
        touched = []
        for det in detections:
            centroid = median_depth_centroid(det.mask, depth, intrinsics, pose)
            if centroid is None:
                continue
            existing = self._match(det, centroid)
            if existing is None:
                touched.append(self._new_instance(
                    det.category, centroid, det.score, det.object_id))
                continue
            # Same object seen again: refresh position and state, keep best
            # score.
            existing.centroid = centroid
            if det.score > existing.score:
                existing.attributes["detection score"] = float(det.score)
            existing.attributes.update(
                self.classifier.classify(det.category, det.object_id))
            touched.append(existing)
        return touched

    def _match(self, det: DetectionMask, centroid: np.ndarray) -> ObjectInstance | None:
        for inst in self.instances:
            if det.object_id is not None and inst.sim_id == det.object_id:
                return inst
        if det.object_id is not None:
            # The mask carries identity, so a new id is a new object even if
            # it sits within the merge radius (adjacent slices do).
            return None
        best, best_d = None, self.merge_dist
        for inst in self.instances:
            if inst.label != det.category:
                continue
            d = float(np.linalg.norm(inst.centroid - centroid))
            if d < best_d:
                best, best_d = inst, d
        return best

    def find(
        self,
        label: str,
        near: np.ndarray | None = None,
        radius: float | None = None,
        exclude: set[int] | None = None,
    ) -> list[ObjectInstance]:
        """Instances of a category, nearest-first to an optional anchor."""
        hits = [i for i in self.instances if i.label == label]
        if exclude:
            hits = [i for i in hits if i.instance_id not in exclude]
        if near is not None:
            hits.sort(key=lambda i: (float(np.linalg.norm(i.centroid - near)),
                                     i.instance_id))
            if radius is not None:
                hits = [i for i in hits
                        if float(np.linalg.norm(i.centroid - near)) <= radius]
        else:
            hits.sort(key=lambda i: (-i.score, i.instance_id))
        return hits

    def drop(self, instance: ObjectInstance) -> None:
        self.instances = [i for i in self.instances
                          if i.instance_id != instance.instance_id]
