"""Versioned model checkpoints (JSON or binary .npz)"""

import json
from dataclasses import asdict
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from engine.spec import BlockWidths, HeadSpec, ModelSpec
from engine.state import ModelState
from storage.files import atomic_write
from utils.errors import ContractViolation

CHECKPOINT_VERSION = 1


def spec_to_dict(spec: ModelSpec) -> dict:
    return {
        "task_mode": spec.task_mode,
        "blocks": spec.blocks.as_dict(),
        "genre_cardinality": spec.genre_cardinality,
        "heads": [asdict(head) for head in spec.heads],
        "trunk_layers": [list(layer) for layer in spec.trunk_layers],
        "series_input_width": spec.series_input_width,
        "cell": spec.cell,
    }


def spec_from_dict(data: dict) -> ModelSpec:
    heads = tuple(
        HeadSpec(
            name=head["name"],
            width=head["width"],
            activation=head["activation"],
            bounds=tuple(head["bounds"]) if head.get("bounds") is not None else None,
            horizon=head.get("horizon"),
        )
        for head in data["heads"]
    )
    return ModelSpec(
        task_mode=data["task_mode"],
        blocks=BlockWidths(**data["blocks"]),
        genre_cardinality=data["genre_cardinality"],
        heads=heads,
        trunk_layers=tuple((int(w), a) for w, a in data["trunk_layers"]),
        series_input_width=data["series_input_width"],
        cell=data["cell"],
    )


def _tensor_to_json(array: np.ndarray) -> dict:
    return {"shape": list(array.shape), "data": array.reshape(-1).tolist()}


def _tensor_from_json(item: dict) -> np.ndarray:
    return np.asarray(item["data"], dtype=float).reshape(item["shape"])


def save_checkpoint(path: Union[str, Path], spec: ModelSpec, state: ModelState, extra: dict = None) -> Path:
    """Write spec, named tensors, Adam moments and step count; format follows the suffix"""
    path = Path(path)
    header = {
        "version": CHECKPOINT_VERSION,
        "spec": spec_to_dict(spec),
        "step_count": state.step_count,
        "extra": extra or {},
    }
    if path.suffix == ".npz":
        arrays = {"header": np.array(json.dumps(header, sort_keys=True))}
        for group, tensors in (("param", state.params), ("m", state.m), ("v", state.v)):
            for name, value in tensors.items():
                arrays[f"{group}/{name}"] = value

        def write(tmp):
            with open(tmp, "wb") as handle:
                np.savez(handle, **arrays)
    else:
        document = dict(header)
        document["params"] = {k: _tensor_to_json(v) for k, v in state.params.items()}
        document["m"] = {k: _tensor_to_json(v) for k, v in state.m.items()}
        document["v"] = {k: _tensor_to_json(v) for k, v in state.v.items()}

        def write(tmp):
            tmp.write_text(json.dumps(document, sort_keys=True))
    return atomic_write(path, write)


def load_checkpoint(path: Union[str, Path]) -> Tuple[ModelSpec, ModelState, dict]:
    path = Path(path)
    if path.suffix == ".npz":
        with np.load(path, allow_pickle=False) as archive:
            header = json.loads(str(archive["header"]))
            groups = {"param": {}, "m": {}, "v": {}}
            for key in archive.files:
                if "/" in key:
                    group, name = key.split("/", 1)
                    groups[group][name] = archive[key].copy()
        params, m, v = groups["param"], groups["m"], groups["v"]
    else:
        header = json.loads(path.read_text())
        params = {k: _tensor_from_json(t) for k, t in header["params"].items()}
        m = {k: _tensor_from_json(t) for k, t in header["m"].items()}
        v = {k: _tensor_from_json(t) for k, t in header["v"].items()}
    if header.get("version") != CHECKPOINT_VERSION:
        raise ContractViolation(f"unsupported checkpoint version {header.get('version')}")
    spec = spec_from_dict(header["spec"])
    state = ModelState(params=params, m=m, v=v, step_count=int(header["step_count"]))
    return spec, state, header.get("extra", {})
