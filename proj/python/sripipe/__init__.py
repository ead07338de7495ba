"""LiDAR spherical range image pipeline: projection, pseudo-RGB composition,
annotation conversion, tracking, and evaluation."""

from ._sripipe import (
    BBox,
    Detection,
    Error,
    ProjectionConfig,
    Tracker,
    TrackerConfig,
    TrackOutput,
    TrackStatus,
    __version__,
    box_iou,
    compose_frame,
    convert_points,
    evaluate_files,
    labelme_to_yolo,
    project_point,
    serialize_detections,
    split_dataset,
    unproject_pixel,
    yolo_to_labelme,
)

__all__ = [
    "BBox",
    "Detection",
    "Error",
    "ProjectionConfig",
    "Tracker",
    "TrackerConfig",
    "TrackOutput",
    "TrackStatus",
    "__version__",
    "box_iou",
    "compose_frame",
    "convert_points",
    "evaluate_files",
    "labelme_to_yolo",
    "project_point",
    "serialize_detections",
    "split_dataset",
    "unproject_pixel",
    "yolo_to_labelme",
]
