"""Attention pooling: softmax-weighted spatial sum replacing global average
pooling when reducing class localization maps to classification scores."""

import torch.nn.functional as F


def attention_pool(maps):
    """Reduce class maps to scores with spatial attention.

    maps: (C, h, w) or (B, C, h, w) tensor. Returns (scores, attention)
    where attention is the per-class spatial softmax of the maps (rows sum
    to 1) and scores[c] = sum_i maps[c, i] * attention[c, i].
    """
    squeeze = maps.dim() == 3
    if squeeze:
        maps = maps.unsqueeze(0)
    b, c, h, w = maps.shape
    flat = maps.reshape(b, c, h * w)
    attention = F.softmax(flat, dim=-1)
    scores = (flat * attention).sum(dim=-1)
    attention = attention.reshape(b, c, h, w)
    if squeeze:
        return scores[0], attention[0]
    return scores, attention
