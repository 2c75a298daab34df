"""JSON/CSV encodings for matrices, orbit listings, spectra and check reports."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable

import numpy as np

from .chain import OrbitRecord


def matrix_to_json(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(data: list) -> np.ndarray:
    try:
        rows = [[complex(re, im) for re, im in row] for row in data]
        M = np.array(rows, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValueError("matrix JSON must be a list of rows of [re, im] pairs") from exc
    if M.ndim != 2:
        raise ValueError("matrix JSON must be a list of rows of [re, im] pairs")
    return M


def orbit_report(n_sites: int, orbits: Iterable[OrbitRecord]) -> dict:
    # "count" is the number of basis states the orbit covers
    entries = [{"rep": o.representative.to_text(), "length": o.length, "count": o.length}
               for o in orbits]
    return {"spins": n_sites, "orbits": entries, "total_states": 1 << n_sites}


def verification_report(check: str, n_sites: int, residual: float, tolerance: float, **extra) -> dict:
    report = {
        "check": check,
        "spins": n_sites,
        "residual": float(residual),
        "tolerance": float(tolerance),
        "pass": bool(residual <= tolerance),
    }
    report.update(extra)
    return report


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=False)


def json_lines(records: Iterable[dict]) -> str:
    return "".join(json.dumps(r) + "\n" for r in records)


def csv_text(header: list[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()
