from .failure import detect_failure_pixeldiff
from .geometry import CameraIntrinsics, Pose, project, unproject
from .mapping import (
    DEFAULT_BANDS,
    DEFAULT_CELL_M,
    EXPLORED_THRESHOLD,
    FLOOR_MAX,
    OccupancyMap,
)
from .objects import (
    ATTRIBUTE_KEYS,
    AttributeClassifier,
    DefaultAttributeClassifier,
    MERGE_DIST,
    ObjectInstance,
    ObjectMemory,
    OracleAttributeClassifier,
    median_depth_centroid,
)

__all__ = [
    "detect_failure_pixeldiff", "CameraIntrinsics", "Pose", "project",
    "unproject", "DEFAULT_BANDS", "DEFAULT_CELL_M", "EXPLORED_THRESHOLD",
    "FLOOR_MAX", "OccupancyMap", "ATTRIBUTE_KEYS", "AttributeClassifier",
    "DefaultAttributeClassifier", "MERGE_DIST", "ObjectInstance",
    "ObjectMemory", "OracleAttributeClassifier", "median_depth_centroid",
]
