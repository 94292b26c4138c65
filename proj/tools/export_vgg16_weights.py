#!/usr/bin/env python3
"""Export torchvision's pretrained VGG-16 convolutional weights to the
tensor-archive format the encoder loader reads.

Requires torch + torchvision with the weights already downloadable (or cached
under TORCH_HOME). Usage:

    python3 tools/export_vgg16_weights.py vgg16_weights.nta
"""

import argparse
import json
import struct
import sys

MAGIC = b"F2ATNSR1"

# features[] indices of the 13 conv layers, grouped by stage.
STAGE_CONV_INDICES = [
    [0, 2],
    [5, 7],
    [10, 12, 14],
    [17, 19, 21],
    [24, 26, 28],
]


def write_archive(path, meta, tensors):
    """tensors: dict name -> (dims tuple of 4 ints, float32 bytes)."""
    meta_bytes = json.dumps(meta, sort_keys=True, separators=(",", ":")).encode()
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<Q", len(meta_bytes)))
        f.write(meta_bytes)
        f.write(struct.pack("<Q", len(tensors)))
        for name in sorted(tensors):
            dims, data = tensors[name]
            encoded = name.encode()
            f.write(struct.pack("<I", len(encoded)))
            f.write(encoded)
            f.write(struct.pack("<4I", *dims))
            f.write(data)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("output", help="archive path to write")
    args = parser.parse_args()

    try:
        import torch
        from torchvision.models import VGG16_Weights, vgg16
    except ImportError as exc:
        sys.exit(f"torch/torchvision required: {exc}")

    model = vgg16(weights=VGG16_Weights.IMAGENET1K_V1)
    features = model.features

    tensors = {}
    for stage, conv_indices in enumerate(STAGE_CONV_INDICES, start=1):
        for i, idx in enumerate(conv_indices, start=1):
            conv = features[idx]
            assert isinstance(conv, torch.nn.Conv2d), f"features[{idx}] is not conv"
            w = conv.weight.detach().to(torch.float32).contiguous()
            b = conv.bias.detach().to(torch.float32).contiguous()
            out_ch, in_ch, kh, kw = w.shape
            assert (kh, kw) == (3, 3)
            tensors[f"vgg16.conv{stage}_{i}.weight"] = (
                (out_ch, in_ch, kh, kw),
                w.numpy().tobytes(),
            )
            tensors[f"vgg16.conv{stage}_{i}.bias"] = (
                (1, out_ch, 1, 1),
                b.numpy().tobytes(),
            )

    meta = {"source": "torchvision vgg16 IMAGENET1K_V1", "layers": 13}
    write_archive(args.output, meta, tensors)
    print(f"wrote {len(tensors)} tensors to {args.output}")


if __name__ == "__main__":
    main()
