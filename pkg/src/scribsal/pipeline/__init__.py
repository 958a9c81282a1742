from .checkpoint import load_checkpoint, load_into_model, save_checkpoint
from .config import TrainConfig, config_from_dict, config_hash, load_config, save_config
from .infer import infer, infer_image, load_model
from .train import RunState, train

__all__ = [
    "TrainConfig", "config_from_dict", "config_hash", "load_config", "save_config",
    "save_checkpoint", "load_checkpoint", "load_into_model",
    "train", "RunState", "infer", "infer_image", "load_model",
]
