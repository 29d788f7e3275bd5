"""File formats: state and sigma JSON input, distribution / report / table output.

All floats are written with 12 significant digits so that repeated runs give
byte-identical files.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .fock import MixedState, PhotonNumberMismatch, SectorState

SIG_DIGITS = 12
ZERO_SNAP = 1e-15


class StateFileError(ValueError):
    pass


def fmt_float(x: float) -> float | str:
    """Round to 12 significant digits.

    Magnitudes below 1e-15 are rounding residue of exact zeros and are
    written as 0.0 so output does not depend on the BLAS in use.
    """
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    if abs(x) < ZERO_SNAP:
        return 0.0
    return float(f"{x:.{SIG_DIGITS}g}")


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    return obj


def dumps_json(obj: Any) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=False) + "\n"


def dumps_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_clean(v) if not isinstance(v, str) else v for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

def _amplitude_table(entries, key="occ"):
    out = []
    for e in entries:
        try:
            out.append((e[key], complex(float(e.get("re", 0.0)), float(e.get("im", 0.0)))))
        except (KeyError, TypeError, ValueError) as exc:
            raise StateFileError(f"malformed amplitude entry {e!r}") from exc
    return out


def _raw_norm(amps) -> float:
    return math.sqrt(sum(abs(a) ** 2 for _, a in amps))


def state_from_json(doc: dict):
    """Build a state from a parsed JSON document.

    Returns ``(state, norm)`` where ``norm`` is the norm of the listed
    amplitudes before normalization (1 for ensembles).

    Pure states: ``{"modes", "photons", "amplitudes": [{"occ", "re", "im"}]}``.
    Two-party states use ``"photons": [N_A, N_B]`` and entries
    ``{"occ_a", "occ_b", "re", "im"}``. Ensembles:
    ``{"components": [{"weight", "state"}]}``.
    """
    if not isinstance(doc, dict):
        raise StateFileError("state document must be a JSON object")
    if "components" in doc:
        comps = []
        for c in doc["components"]:
            s, _ = state_from_json(c["state"])
            comps.append((float(c["weight"]), s))
        return MixedState(tuple(comps)), 1.0
    try:
        M, N = int(doc["modes"]), doc["photons"]
        entries = doc["amplitudes"]
    except KeyError as exc:
        raise StateFileError(f"state file missing field {exc}") from exc
    if isinstance(N, list):
        from .bipartite import BipartiteState

        NA, NB = (int(x) for x in N)
        amps = _amplitude_table(entries, "occ_a")
        pairs = {}
        for e, (_, a) in zip(entries, amps):
            nA, nB = tuple(e["occ_a"]), tuple(e["occ_b"])
            _check_occ(nA, M, NA)
            _check_occ(nB, M, NB)
            pairs[(nA, nB)] = pairs.get((nA, nB), 0) + a
        norm = _raw_norm(amps)
        if norm == 0:
            raise StateFileError("all amplitudes are zero")
        return BipartiteState.from_dict(M, NA, NB, pairs), norm
    N = int(N)
    amps = _amplitude_table(entries)
    table = {}
    for occ, a in amps:
        _check_occ(tuple(occ), M, N)
        table[tuple(occ)] = table.get(tuple(occ), 0) + a
    norm = _raw_norm(amps)
    if norm == 0:
        raise StateFileError("all amplitudes are zero")
    return SectorState.from_dict(M, N, table), norm


def _check_occ(occ, M, N):
    if len(occ) != M:
        raise StateFileError(f"occupation {list(occ)} does not have {M} modes")
    if any(k < 0 for k in occ):
        raise StateFileError(f"negative occupation in {list(occ)}")
    if sum(occ) != N:
        raise PhotonNumberMismatch(f"occupation {list(occ)} does not hold {N} photons")


def load_state(path) -> tuple[Any, float]:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: {exc}") from exc
    return state_from_json(doc)


def state_to_json(state) -> dict:
    """Inverse of :func:`state_from_json` (zero amplitudes are omitted)."""
    if isinstance(state, MixedState):
        return {"components": [{"weight": p, "state": state_to_json(s)} for p, s in state.components]}
    if isinstance(state, SectorState):
        entries = [
            {"occ": list(v), "re": a.real, "im": a.imag} for v, a in state.support().items()
        ]
        return {"modes": state.M, "photons": state.N, "amplitudes": entries}
    entries = [
        {"occ_a": list(a), "occ_b": list(b), "re": z.real, "im": z.imag}
        for (a, b), z in state.support().items()
    ]
    return {"modes": state.M, "photons": list(state.N), "amplitudes": entries}


def save_state(state, path) -> None:
    Path(path).write_text(dumps_json(state_to_json(state)))


# ---------------------------------------------------------------------------
# sigma configuration
# ---------------------------------------------------------------------------

def _rep_key(key: str) -> tuple[int, ...]:
    key = key.strip().lstrip("Ee")
    if "," in key:
        return tuple(int(x) for x in key.split(","))
    return tuple(int(ch) for ch in key)


def sigma_from_json(doc: dict) -> dict:
    """Per-class permutations keyed by representative.

    Accepts ``{"11000": [0, 1, 2, 3, 4], ...}`` (comma-separated occupations
    for counts above 9) or the same mapping under a ``"sigma"`` key.
    """
    doc = doc.get("sigma", doc)
    if not isinstance(doc, dict):
        raise StateFileError("sigma must be an object mapping class representatives to permutations")
    return {_rep_key(k): tuple(int(x) for x in v) for k, v in doc.items()}


def load_sigma(path) -> dict:
    return sigma_from_json(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# output documents
# ---------------------------------------------------------------------------

def distribution_doc(dist, name: str | None = None) -> dict:
    doc = {"measurement": name, "probabilities": list(dist.probs), "success": dist.success}
    if getattr(dist, "breakdown", None):
        doc["breakdown"] = [
            {"class": c, "label": m, "probability": p} for (c, m), p in sorted(dist.breakdown.items())
        ]
    return doc


def distribution_rows(dist):
    return ["label", "probability"], [[m, p] for m, p in enumerate(dist.probs)]


def joint_doc(joint, pair_name: str, state=None) -> dict:
    """M x M table with (class_A, class_B) block annotations when a state is given."""
    doc = {"pair": pair_name, "probabilities": joint.probs.tolist(), "success": joint.success}
    if state is not None:
        from .bipartite import joint_subspace_weights

        doc["class_blocks"] = [
            {"class_a": a.name, "class_b": b.name, "weight": w}
            for (a, b), w in sorted(joint_subspace_weights(state).items(), key=lambda kv: (kv[0][0].name, kv[0][1].name))
        ]
    return doc


def joint_rows(joint):
    M = joint.M
    return ["mu_a", "mu_b", "probability"], [[a, b, joint.probs[a, b]] for a in range(M) for b in range(M)]
