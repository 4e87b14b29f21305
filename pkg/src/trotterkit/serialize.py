"""JSON formats for Hamiltonians and reports.

Hamiltonian schema (version 1):

    {
      "version": 1,
      "n": int,
      "groups": [{"label": str,
                  "terms": [{"coeff": [re, im], "pauli": "XIZY..."}],
                  "packets": [[term indices], ...]   # optional
                 }, ...],
      "geometry": {"d": int, "alpha": float|null} | null,
      "fields": [h_j, ...] | null
    }

Pauli letter strings put qubit 0 leftmost.  The optional "packets" entry
records how terms combine into elementary packets (bond plus its field,
say); absent, every term is its own packet.
"""

from __future__ import annotations

import json
from typing import Any

from .hamiltonians import Geometry, GroupedHamiltonian, TermGroup
from .pauli import PauliSum, PauliTerm

SCHEMA_VERSION = 1


def _term_entries(packet: PauliSum) -> list[dict[str, Any]]:
    return [
        {
            "coeff": [term.coeff.real, term.coeff.imag],
            "pauli": term.label(),
        }
        for term in packet.term_list()
    ]


def hamiltonian_to_dict(h: GroupedHamiltonian) -> dict[str, Any]:
    groups = []
    for g in h.groups:
        terms: list[dict[str, Any]] = []
        packets: list[list[int]] = []
        for packet in g.packets:
            entries = _term_entries(packet)
            packets.append(list(range(len(terms), len(terms) + len(entries))))
            terms.extend(entries)
        groups.append({"label": g.label, "terms": terms, "packets": packets})
    geometry = None
    if h.geometry is not None:
        geometry = {"d": h.geometry.d, "alpha": h.geometry.alpha}
    return {
        "version": SCHEMA_VERSION,
        "n": h.n,
        "groups": groups,
        "geometry": geometry,
        "fields": list(h.field_values) if h.field_values is not None else None,
    }


def hamiltonian_from_dict(data: dict[str, Any]) -> GroupedHamiltonian:
    if data.get("version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported Hamiltonian schema version {data.get('version')!r}")
    n = int(data["n"])
    groups = []
    for g in data["groups"]:
        terms = [
            PauliTerm.from_label(entry["pauli"], complex(entry["coeff"][0], entry["coeff"][1]))
            for entry in g["terms"]
        ]
        if any(term.n != n for term in terms):
            raise ValueError(f"group {g['label']!r} has terms with the wrong qubit count")
        packet_index = g.get("packets")
        if packet_index is None:
            packets = tuple(PauliSum.from_term(t) for t in terms)
        else:
            packets = tuple(
                PauliSum.from_terms([terms[i] for i in idxs]) for idxs in packet_index if idxs
            )
        groups.append(TermGroup(g["label"], packets))
    geometry = None
    if data.get("geometry") is not None:
        geo = data["geometry"]
        alpha = geo.get("alpha")
        geometry = Geometry(d=int(geo["d"]), alpha=None if alpha is None else float(alpha))
    fields = data.get("fields")
    return GroupedHamiltonian(
        n, groups, geometry, None if fields is None else [float(v) for v in fields]
    )


def hamiltonian_to_json(h: GroupedHamiltonian) -> str:
    return json.dumps(hamiltonian_to_dict(h), indent=2)


def hamiltonian_from_json(text: str) -> GroupedHamiltonian:
    return hamiltonian_from_dict(json.loads(text))


def format_float(x: float) -> str:
    """Fixed 17-significant-digit decimal rendering for byte-stable CSV."""
    return format(float(x), ".17g")
