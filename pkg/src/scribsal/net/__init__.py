from .attention_units import (ChannelAttention, ChannelOnlyUnit, ConvReluBN,
                              JointAttentionUnit, PlainUnit, SpatialAttention)
from .canny import CannyConfig, canny_edges, to_intensity
from .das import DenseAggregation
from .decoder import BoundaryGuidedDecoder
from .eau import EdgeAuxiliaryUnit
from .encoder import PyramidEncoder
from .model import (ABLATION_LATTICE, BoundaryAwareModule, NetworkConfig, BoundaryAwareSaliencyNet,
                    ablation_config, count_parameters, saliency_forward,
                    toy_network_config)

__all__ = [
    "ChannelAttention", "SpatialAttention", "JointAttentionUnit", "ChannelOnlyUnit",
    "PlainUnit", "ConvReluBN", "CannyConfig", "canny_edges", "to_intensity",
    "DenseAggregation", "BoundaryGuidedDecoder", "EdgeAuxiliaryUnit", "PyramidEncoder",
    "BoundaryAwareSaliencyNet", "NetworkConfig", "BoundaryAwareModule", "toy_network_config",
    "ablation_config", "ABLATION_LATTICE", "count_parameters", "saliency_forward",
]
