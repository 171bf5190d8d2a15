"""Surrogate CNN standing in for one lookup table during training."""

import torch
from torch import nn

HIDDEN = 64


class SurrogateNet(nn.Module):
    """Maps a gathered k-pixel tuple (values in [0, 1]) to an r x r block in [-1, 1].

    One convolution over the gathered tuple (presented as k input channels,
    equivalent to a 1 x k kernel over the reshaped tuple), then five 1 x 1
    convolutions interleaved with ReLU, pixel rearrangement to an r x r
    block, and a final tanh.  The receptive field is exactly the k gathered
    pixels.  Weight initialization is the framework default (Kaiming
    uniform); this is a declared contract, not derived from elsewhere.
    """

    def __init__(self, k, r):
        super().__init__()
        self.k = k
        self.r = r
        layers = [nn.Conv2d(k, HIDDEN, 1), nn.ReLU()]
        for _ in range(4):
            layers += [nn.Conv2d(HIDDEN, HIDDEN, 1), nn.ReLU()]
        layers += [nn.Conv2d(HIDDEN, r * r, 1)]
        self.body = nn.Sequential(*layers)

    def forward(self, x):
        """(B, k, H, W) in [0, 1] -> (B, r*r, H, W) in [-1, 1].

        Output channel c holds block cell (c // r, c % r).
        """
        return torch.tanh(self.body(x))

    def zero_output(self):
        """Zero the final layer so the net is the constant-zero function."""
        with torch.no_grad():
            self.body[-1].weight.zero_()
            self.body[-1].bias.zero_()
        return self
