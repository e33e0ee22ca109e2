"""Instance files, report documents, and frontier tables.

Instances are JSON: {"label": str, "p": int, "d": int, "generators": [d x d
row-major integer arrays]}.  Reports are JSON with sorted keys and a fixed
layout so identical inputs and flags reproduce identical bytes.  Frontier
tables are CSV with columns p, k, m, all_solvable, counterexample_rhs_or_empty.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .diameter import DiameterReport
from .errors import InstanceFormatError
from .fpmat import is_prime
from .groups import AffineInstance
from .powersums import FrontierRow
from .witness import CertificationResult, DecompositionWitness

__all__ = [
    "instance_to_dict",
    "instance_from_dict",
    "load_instance",
    "save_instance",
    "diameter_report_to_dict",
    "certification_to_dict",
    "decomposition_to_dict",
    "write_frontier_csv",
    "dumps_canonical",
]


def dumps_canonical(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def instance_to_dict(inst: AffineInstance) -> dict:
    return {
        "label": inst.label,
        "p": inst.p,
        "d": inst.d,
        "generators": [[[int(x) for x in row] for row in g] for g in inst.generators],
    }


def instance_from_dict(doc) -> AffineInstance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    missing = {"p", "d", "generators"} - doc.keys()
    if missing:
        raise InstanceFormatError(f"instance document is missing keys: {sorted(missing)}")
    p, d = doc["p"], doc["d"]
    if not isinstance(p, int) or not isinstance(d, int):
        raise InstanceFormatError("p and d must be integers")
    if not is_prime(p):
        raise InstanceFormatError(f"p = {p} is not prime")
    gens = doc["generators"]
    if not isinstance(gens, list) or not gens:
        raise InstanceFormatError("generators must be a nonempty list")
    mats = []
    for g in gens:
        A = np.asarray(g, dtype=np.int64)
        if A.shape != (d, d):
            raise InstanceFormatError(f"generator shape {A.shape} does not match d = {d}")
        if A.min() < 0 or A.max() >= p:
            raise InstanceFormatError("generator entries must lie in [0, p)")
        mats.append(A)
    try:
        return AffineInstance(
            p=p, d=d, generators=tuple(mats), label=str(doc.get("label", ""))
        )
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc


def load_instance(path) -> AffineInstance:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"cannot read instance file {path}: {exc}") from exc
    return instance_from_dict(doc)


def save_instance(inst: AffineInstance, path) -> None:
    Path(path).write_text(dumps_canonical(instance_to_dict(inst)))


def diameter_report_to_dict(report: DiameterReport, flags: dict | None = None) -> dict:
    doc = {
        "schema": "orbdiam.diameter/1",
        "instance": {"label": report.label, "p": report.p, "d": report.d},
        "group_order": report.group_order,
        "irreducible": True,
        "point_count": report.p**report.d,
        "zero_orbit_size": 1,  # the zero orbit is excluded from the table below
        "orbit_count": report.orbit_count,
        "orbits": [
            {
                "id": r.orbit_id,
                "representative": list(r.representative),
                "size": r.size,
                "directed_diameter": r.directed,
                "coverage_by_step": r.coverage_by_step,
                **(
                    {"undirected_diameter": r.undirected}
                    if r.undirected is not None
                    else {}
                ),
            }
            for r in report.rows
        ],
        "overall_directed_diameter": report.overall_directed,
    }
    if report.overall_undirected is not None:
        doc["overall_undirected_diameter"] = report.overall_undirected
    if flags:
        doc["flags"] = flags
    return doc


def decomposition_to_dict(w: DecompositionWitness) -> dict:
    return {
        "target": [int(x) for x in w.target],
        "orbit_id": w.orbit_id,
        "branch": w.branch,
        "summands": [[int(x) for x in row] for row in w.summands],
        "length": w.length,
        "bound": w.bound,
        "branch_bound": w.branch_bound,
        "verified": w.verified,
    }


def certification_to_dict(result: CertificationResult, flags: dict | None = None) -> dict:
    doc = {
        "schema": "orbdiam.certify/1",
        "instance": {"label": result.label, "p": result.p, "d": result.d},
        "group_order": result.group_order,
    }
    if result.status == "not_applicable":
        doc["certification"] = {
            "status": "not_applicable",
            "reason": result.reason,
        }
    else:
        doc["certification"] = {
            "status": "certified",
            "branch": result.branch,
            "k": result.k,
            "m": result.m,
            "length_bound": result.bound,
            "branch_bound": result.branch_bound,
            "max_witness_length": result.max_length,
            "verified": result.verified,
            "targets": {
                "mode": result.targets_mode,
                "count": result.targets_count,
                "seed": result.seed,
            },
            "orbits": [
                {
                    "id": r.orbit_id,
                    "size": r.size,
                    "targets_checked": r.targets_checked,
                    "max_length": r.max_length,
                }
                for r in result.rows
            ],
            "sample_witnesses": [
                decomposition_to_dict(w) for w in result.sample_witnesses
            ],
        }
    if flags:
        doc["flags"] = flags
    return doc


def write_frontier_csv(rows: list[FrontierRow], fileobj) -> None:
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(["p", "k", "m", "all_solvable", "counterexample_rhs_or_empty"])
    for r in rows:
        counterexample = (
            ";".join(str(b) for b in r.counterexample) if r.counterexample else ""
        )
        writer.writerow([r.p, r.k, r.m, str(r.all_solvable).lower(), counterexample])
