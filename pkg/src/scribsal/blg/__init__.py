from .attention import attention_pool
from .boundary import boundary_from_trimap
from .cam import UNCERTAIN, cam_probabilities, trimap_from_cam
from .classifier import (BLGClassifierSpec, BLGTrainConfig, BoundaryLabelClassifier,
                         classifier_forward, train_classifier)
from .generate import BoundaryGenConfig, generate_boundary_labels

__all__ = [
    "attention_pool", "boundary_from_trimap", "cam_probabilities", "trimap_from_cam",
    "UNCERTAIN", "BLGClassifierSpec", "BLGTrainConfig", "BoundaryLabelClassifier",
    "classifier_forward", "train_classifier", "BoundaryGenConfig",
    "generate_boundary_labels",
]
