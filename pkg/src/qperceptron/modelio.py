"""Model persistence and CSV ingestion.

Model files are versioned JSON.  Matrices are stored as row-major lists of
[re, im] pairs; floats are serialized with Python's shortest exact decimal
representation, so save/load round-trips are bit identical.  Loading
re-validates Hermiticity and the P0 residual identity; any failure is an
error, never a warning.

The CSV dialect is fixed: comma separator, dot decimal, mandatory header
row, no quoting.  Feature order follows header order with the label column
(if any) excluded.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .encoding import EncodingScheme, FeatureVector
from .ensemble import EnsembleModel
from .errors import DataError, ModelFormatError
from .perceptron import (NormalizationMode, PerceptronModel, RegimeReport,
                         diagnose_regime)
from .linops import Operator
from .policy import NumericPolicy

MODEL_FORMAT_VERSION = 1
ENSEMBLE_FORMAT_VERSION = 1
WEIGHTS_FORMAT_VERSION = 1

# Elementwise slack for the residual identity on load; the identity holds
# exactly for files this package wrote.
_RESIDUAL_ATOL = 1e-12


def _matrix_to_pairs(matrix: np.ndarray) -> list[list[list[float]]]:
    return [[[float(v.real), float(v.imag)] for v in row] for row in matrix]


def _pairs_to_matrix(pairs, dim: int, name: str) -> np.ndarray:
    try:
        arr = np.array([[complex(re, im) for re, im in row] for row in pairs],
                       dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"operator {name} is malformed: {exc}") from exc
    if arr.shape != (dim, dim):
        raise ModelFormatError(
            f"operator {name} has shape {arr.shape}, expected ({dim}, {dim})")
    return arr


def model_to_dict(model: PerceptronModel, metadata: Optional[dict] = None) -> dict:
    return {
        "version": MODEL_FORMAT_VERSION,
        "encoding": model.encoding.value,
        "norm_mode": model.norm_mode.value,
        "dim": model.dim,
        "n_features": model.n_features,
        "allow_negative": model.allow_negative,
        "operators": {
            "p_minus": _matrix_to_pairs(model.p_minus.entries),
            "p_plus": _matrix_to_pairs(model.p_plus.entries),
            "p_zero": _matrix_to_pairs(model.p_zero.entries),
        },
        "epsilon_policy": {
            "eps_zero": model.policy.eps_zero,
            "eps_herm": model.policy.eps_herm,
            "eps_eig": model.policy.eps_eig,
        },
        "regime": {
            "case": model.regime.case,
            "orthogonality_defect": model.regime.orthogonality_defect,
            "completeness_defect": model.regime.completeness_defect,
            "p_zero_min_eig": model.regime.p_zero_min_eig,
            "physical": model.regime.physical,
        },
        "metadata": {str(k): str(v) for k, v in (metadata or {}).items()},
    }


def model_from_dict(doc: dict) -> PerceptronModel:
    try:
        version = doc["version"]
        if version != MODEL_FORMAT_VERSION:
            raise ModelFormatError(f"unsupported model format version {version!r}")
        dim = int(doc["dim"])
        policy = NumericPolicy(
            eps_zero=float(doc["epsilon_policy"]["eps_zero"]),
            eps_herm=float(doc["epsilon_policy"]["eps_herm"]),
            eps_eig=float(doc["epsilon_policy"]["eps_eig"]),
        )
        matrices = {
            name: _pairs_to_matrix(doc["operators"][name], dim, name)
            for name in ("p_minus", "p_plus", "p_zero")
        }
        encoding = EncodingScheme(doc["encoding"])
        norm_mode = NormalizationMode(doc["norm_mode"])
        n_features = int(doc["n_features"])
        allow_negative = bool(doc.get("allow_negative", False))
        regime = RegimeReport(
            case=str(doc["regime"]["case"]),
            orthogonality_defect=float(doc["regime"]["orthogonality_defect"]),
            completeness_defect=float(doc["regime"]["completeness_defect"]),
            p_zero_min_eig=float(doc["regime"]["p_zero_min_eig"]),
            physical=bool(doc["regime"]["physical"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"model document is malformed: {exc}") from exc

    try:
        p_minus = Operator(matrices["p_minus"], policy=policy)
        p_plus = Operator(matrices["p_plus"], policy=policy)
        p_zero = Operator(matrices["p_zero"], policy=policy)
    except Exception as exc:
        raise ModelFormatError(f"operator failed revalidation: {exc}") from exc

    residual = np.eye(dim) - p_minus.entries - p_plus.entries
    defect = float(np.max(np.abs(p_zero.entries - residual)))
    if defect > _RESIDUAL_ATOL:
        raise ModelFormatError(
            f"P0 residual identity violated on load: max deviation {defect:.3e}")

    return PerceptronModel(
        p_minus=p_minus, p_plus=p_plus, p_zero=p_zero,
        encoding=encoding, norm_mode=norm_mode, regime=regime,
        dim=dim, n_features=n_features, allow_negative=allow_negative,
        policy=policy,
    )


def save_model(model: PerceptronModel, path: str | Path,
               metadata: Optional[dict] = None) -> None:
    Path(path).write_text(
        json.dumps(model_to_dict(model, metadata), indent=2) + "\n",
        encoding="utf-8")


def load_model(path: str | Path) -> PerceptronModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ModelFormatError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model file {path} is not valid JSON: {exc}") from exc
    return model_from_dict(doc)


def save_ensemble(model: EnsembleModel, path: str | Path,
                  metadata: Optional[dict] = None) -> None:
    doc = {
        "version": ENSEMBLE_FORMAT_VERSION,
        "n_features": model.n_features,
        "dof_names": list(model.dof_names),
        "references": list(model.references),
        "perceptrons": [model_to_dict(p) for p in model.perceptrons],
        "metadata": {str(k): str(v) for k, v in (metadata or {}).items()},
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_ensemble(path: str | Path) -> EnsembleModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ModelFormatError(f"cannot read ensemble file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"ensemble file {path} is not valid JSON: {exc}") from exc
    try:
        version = doc["version"]
        if version != ENSEMBLE_FORMAT_VERSION:
            raise ModelFormatError(f"unsupported ensemble format version {version!r}")
        perceptrons = tuple(model_from_dict(p) for p in doc["perceptrons"])
        return EnsembleModel(
            perceptrons=perceptrons,
            dof_names=tuple(str(s) for s in doc["dof_names"]),
            references=tuple(float(v) for v in doc["references"]),
            n_features=int(doc["n_features"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"ensemble document is malformed: {exc}") from exc


def verify_regime(model: PerceptronModel) -> None:
    """Recompute the regime from the operators and compare to the stored
    report; mismatch means the file was tampered with or corrupted."""
    fresh = diagnose_regime(model.p_minus, model.p_plus, model.policy)
    if fresh.case != model.regime.case:
        raise ModelFormatError(
            f"stored regime case {model.regime.case!r} does not match "
            f"recomputed {fresh.case!r}")


def ingest_csv(path: str | Path,
               label_column: Optional[str] = None) -> list[FeatureVector]:
    """Read feature vectors (and labels, when requested) from a CSV file.

    Raises DataError with the offending row and column named for every
    malformed cell, ragged row, or missing label column.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    lines = [line for line in text.splitlines() if line.strip() != ""]
    if not lines:
        raise DataError(f"{path} is empty")
    header = [name.strip() for name in lines[0].split(",")]
    if len(set(header)) != len(header):
        raise DataError(f"{path} has duplicate header names")
    label_idx: Optional[int] = None
    if label_column is not None:
        if label_column not in header:
            raise DataError(
                f"label column {label_column!r} not found in header {header}")
        label_idx = header.index(label_column)
    feature_idx = [i for i in range(len(header)) if i != label_idx]
    if not feature_idx:
        raise DataError(f"{path} has no feature columns")

    records: list[FeatureVector] = []
    for row_no, line in enumerate(lines[1:], start=1):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(header):
            raise DataError(
                f"row {row_no} has {len(cells)} cells, header has {len(header)}")
        features = []
        for i in feature_idx:
            try:
                features.append(float(cells[i]))
            except ValueError:
                raise DataError(
                    f"non-numeric cell at row {row_no}, column {header[i]}: "
                    f"{cells[i]!r}") from None
        label = None
        if label_idx is not None:
            cell = cells[label_idx]
            if cell in ("-1", "+1", "1"):
                label = 1 if cell in ("+1", "1") else -1
            else:
                raise DataError(
                    f"label at row {row_no}, column {header[label_idx]} must "
                    f"be -1 or +1, got {cell!r}")
        records.append(FeatureVector(tuple(features), label=label))
    return records


def write_csv(path: str | Path, header: Sequence[str],
              rows: Sequence[Sequence[object]]) -> None:
    """Write rows in the package CSV dialect (floats via shortest repr)."""
    def fmt(value: object) -> str:
        if isinstance(value, float):
            return repr(value)
        return str(value)

    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
