"""Matrix exchange files and deterministic JSON reports.

Input schema::

    {"n": int, "ordering": "grouped" | "interleaved", "data": [[...2n x 2n...]],
     "oscillators": {"hbar": 1.0, "masses": [...], "frequencies": [...]}}   # optional

Reports are emitted through :func:`dump_json`, which always prints floats
with 17 significant digits so values round-trip and identical inputs give
byte-identical output.
"""

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .covariance import OscillatorSystem
from .errors import DimensionError
from .symplectic import Ordering, SymplecticMatrix


def format_float(x):
    """Decimal form of a double with 17 significant digits."""
    return format(float(x), ".17g")


def dump_json(obj, indent=2):
    """Serialize dicts/lists/scalars to JSON with full-precision floats."""
    pieces = []
    _write(obj, pieces, indent, 0)
    return "".join(pieces)


def _write(obj, out, indent, level):
    pad = " " * (indent * (level + 1))
    closing = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(key))}: ")
            _write(value, out, indent, level + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(closing + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(items):
            out.append(pad)
            _write(value, out, indent, level + 1)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(closing + "]")
    elif isinstance(obj, bool) or obj is None:
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj)!r}")


def canonical_digest(parsed):
    """Hex digest of the canonical JSON serialization of a parsed input."""
    canon = json.dumps(parsed, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class MatrixFile:
    """Parsed exchange file; the data is unvalidated until requested."""

    n: int
    ordering: Ordering
    data: np.ndarray
    system: OscillatorSystem
    digest: str

    def matrix(self, tolerance):
        """Validated matrix at the given tolerance (raises if not symplectic)."""
        return SymplecticMatrix(self.data, self.ordering, tolerance)

    def system_or_default(self):
        return self.system if self.system is not None else OscillatorSystem.unit(self.n)


def matrix_file_from_dict(parsed):
    """Parse the exchange schema; shape and positivity checks only."""
    try:
        n = int(parsed["n"])
        ordering = Ordering(parsed["ordering"])
        data = np.asarray(parsed["data"], dtype=float)
    except (KeyError, ValueError, TypeError) as exc:
        raise DimensionError(f"malformed matrix object: {exc}") from exc
    if n < 1 or data.shape != (2 * n, 2 * n):
        raise DimensionError(f"data must be {2 * n} x {2 * n}, got shape {data.shape}")
    system = None
    if "oscillators" in parsed:
        osc = parsed["oscillators"]
        if not isinstance(osc, dict):
            raise DimensionError("oscillator block must be an object")
        try:
            system = OscillatorSystem(
                hbar=float(osc.get("hbar", 1.0)),
                masses=np.asarray(osc.get("masses", np.ones(n)), dtype=float),
                frequencies=np.asarray(osc.get("frequencies", np.ones(n)), dtype=float),
            )
        except (ValueError, TypeError) as exc:
            raise DimensionError(f"malformed oscillator block: {exc}") from exc
        if system.n != n:
            raise DimensionError(f"oscillator block has {system.n} modes, matrix has {n}")
    return MatrixFile(
        n=n, ordering=ordering, data=data, system=system, digest=canonical_digest(parsed)
    )


def load_matrix_file(path):
    """Parse a matrix exchange file from disk."""
    with open(path, "r", encoding="utf-8") as fh:
        parsed = json.load(fh)
    return matrix_file_from_dict(parsed)


def matrix_to_dict(M, system=None):
    """Exchange-format dict for a matrix (floats kept as floats for dump_json)."""
    out = {
        "n": M.n,
        "ordering": M.ordering.value,
        "data": [[float(x) for x in row] for row in M.data],
    }
    if system is not None:
        out["oscillators"] = {
            "hbar": float(system.hbar),
            "masses": [float(m) for m in system.masses],
            "frequencies": [float(w) for w in system.frequencies],
        }
    return out


def save_matrix_file(path, M, system=None):
    """Write a matrix exchange file with full-precision floats."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_json(matrix_to_dict(M, system)) + "\n")
