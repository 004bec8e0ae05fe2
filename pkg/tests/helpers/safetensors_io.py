"""Test-only helpers: a minimal safetensors writer and a tiny trained MLP.

The writer emits the standard layout (u64 header length, JSON header with
dtype/shape/data_offsets, raw little-endian buffer) so the exporter under
test reads a spec-conformant checkpoint without any framework dependency.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

_DTYPES = {np.dtype(np.float32): "F32", np.dtype(np.float64): "F64"}


def write_safetensors(path: Path, tensors: dict[str, np.ndarray]) -> None:
    header = {}
    payload = bytearray()
    for name, arr in tensors.items():
        if arr.dtype not in _DTYPES:
            raise ValueError(f"unsupported dtype {arr.dtype} for {name}")
        data = np.ascontiguousarray(arr).tobytes()
        start = len(payload)
        payload.extend(data)
        header[name] = {
            "dtype": _DTYPES[arr.dtype],
            "shape": list(arr.shape),
            "data_offsets": [start, start + len(data)],
        }
    blob = json.dumps(header, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        fh.write(payload)


def train_tiny_mlp(seed: int = 0, steps: int = 300) -> dict[str, np.ndarray]:
    """Train a small MLP on a synthetic linear-teacher task.

    Returns the state dict as float32 numpy arrays (weights 2-D, biases
    1-D) so trained fully connected layers carry genuine signal spikes.
    """
    import torch

    torch.manual_seed(seed)
    rng = np.random.default_rng(seed)

    d_in, hidden1, hidden2, n_cls = 784, 256, 128, 10
    x = torch.tensor(rng.normal(size=(4096, d_in)), dtype=torch.float32)
    teacher = torch.tensor(rng.normal(size=(d_in, n_cls)), dtype=torch.float32)
    y = (x @ teacher).argmax(dim=1)

    model = torch.nn.Sequential(
        torch.nn.Linear(d_in, hidden1),
        torch.nn.ReLU(),
        torch.nn.Linear(hidden1, hidden2),
        torch.nn.ReLU(),
        torch.nn.Linear(hidden2, n_cls),
    )
    optimizer = torch.optim.Adam(model.parameters(), lr=1e-3)
    loss_fn = torch.nn.CrossEntropyLoss()
    for _ in range(steps):
        optimizer.zero_grad()
        loss = loss_fn(model(x), y)
        loss.backward()
        optimizer.step()

    out = {}
    for i, layer in enumerate((model[0], model[2], model[4]), start=1):
        out[f"fc{i}.weight"] = layer.weight.detach().numpy().astype(np.float32)
        out[f"fc{i}.bias"] = layer.bias.detach().numpy().astype(np.float32)
    return out
