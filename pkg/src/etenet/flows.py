"""Crisis-group analysis: swap a country's stocks into the panel and rank
which stocks receive or send the most summed effective flow."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DuplicateLabel, UnknownLabel
from .matrices import LabeledMatrix
from .panel import ReturnPanel, augment_lagged, build_panel, lagged_label

DEFAULT_TOP_K = 5


@dataclass(frozen=True)
class GroupSpec:
    """A study group: labels to remove from the base set plus the group's own
    series to append."""

    name: str
    remove_labels: tuple = ()
    add_series: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "remove_labels", tuple(self.remove_labels))
        object.__setattr__(self, "add_series", tuple(self.add_series))

    @property
    def group_labels(self):
        return [s.ticker for s in self.add_series]


@dataclass
class FlowReport:
    group: str
    receivers: list  # (label, score), descending
    senders: list    # (label, score), descending
    top_k: int = DEFAULT_TOP_K
    node_meta: dict = field(default_factory=dict)

    def top_receivers(self):
        return _head_with_ties(self.receivers, self.top_k)

    def top_senders(self):
        return _head_with_ties(self.senders, self.top_k)


def _head_with_ties(ranked, k):
    if len(ranked) <= k:
        return list(ranked)
    cut = k
    kth = ranked[k - 1][1]
    while cut < len(ranked) and ranked[cut][1] == kth:
        cut += 1
    return list(ranked[:cut])


def build_group_panel(base_series, group: GroupSpec, cal, max_lag: int = 1) -> ReturnPanel:
    """Panel over (base - removed + added) series, lag-augmented."""
    base_labels = {s.ticker for s in base_series}
    for lbl in group.remove_labels:
        if lbl not in base_labels:
            raise UnknownLabel(f"{group.name}: cannot remove unknown label {lbl!r}")
    kept = [s for s in base_series if s.ticker not in set(group.remove_labels)]
    kept_labels = {s.ticker for s in kept}
    for s in group.add_series:
        if s.ticker in kept_labels:
            raise DuplicateLabel(f"{group.name}: added label {s.ticker!r} already present")
    panel = build_panel(list(kept) + list(group.add_series), cal)
    if max_lag >= 1:
        panel = augment_lagged(panel, max_lag)
    return panel


def _check_lagged_sources(ete, group_labels, lag):
    sources = [lagged_label(lbl, lag) for lbl in group_labels]
    missing = [s for s in sources if s not in ete.labels]
    if missing:
        raise UnknownLabel(f"lagged group columns missing from matrix: {missing}")
    return sources


def _group_family(group_labels):
    return set(group_labels)


def reception_ranking(ete: LabeledMatrix, group_labels, top_k: int = DEFAULT_TOP_K,
                      lag: int = 1):
    """For each outside stock, sum the flow received from the group's lagged
    columns; rank descending."""
    sources = _check_lagged_sources(ete, group_labels, lag)
    group = _group_family(group_labels)
    src_idx = [ete.labels.index(s) for s in sources]
    scores = []
    for d, lbl in enumerate(ete.labels):
        base = lbl.rstrip("*")
        if base in group or lbl != base:  # skip group members and lagged copies
            continue
        scores.append((lbl, float(ete.values[src_idx, d].sum())))
    scores.sort(key=lambda t: (-t[1], t[0]))
    return _head_with_ties(scores, top_k)


def emission_ranking(ete: LabeledMatrix, group_labels, top_k: int = DEFAULT_TOP_K,
                     lag: int = 1):
    """For each lagged group column, sum the flow sent to all outside stocks;
    rank descending. Reported under the unlagged group label."""
    sources = _check_lagged_sources(ete, group_labels, lag)
    group = _group_family(group_labels)
    dest_idx = [
        d for d, lbl in enumerate(ete.labels)
        if lbl == lbl.rstrip("*") and lbl not in group
    ]
    scores = []
    for lbl, src in zip(group_labels, sources):
        s = ete.labels.index(src)
        scores.append((lbl, float(ete.values[s, dest_idx].sum())))
    scores.sort(key=lambda t: (-t[1], t[0]))
    return _head_with_ties(scores, top_k)


def flow_report(ete: LabeledMatrix, group: GroupSpec, top_k: int = DEFAULT_TOP_K,
                node_meta=None) -> FlowReport:
    receivers = reception_ranking(ete, group.group_labels, top_k=len(ete.labels))
    senders = emission_ranking(ete, group.group_labels, top_k=len(group.group_labels))
    return FlowReport(group.name, receivers, senders, top_k=top_k,
                      node_meta=node_meta or {})


def save_flow_report(report: FlowReport, path, fmt="csv"):
    """`label,country,industry,sub_industry,score` for receivers and senders."""
    path = Path(path)
    if fmt == "json":
        payload = {
            "group": report.group,
            "top_k": report.top_k,
            "receivers": [_row(report, lbl, sc) for lbl, sc in report.top_receivers()],
            "senders": [_row(report, lbl, sc) for lbl, sc in report.top_senders()],
        }
        path.write_text(json.dumps(payload, indent=2))
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["role", "label", "country", "industry", "sub_industry", "score"])
        for role, rows in (("receiver", report.top_receivers()),
                           ("sender", report.top_senders())):
            for lbl, sc in rows:
                meta = report.node_meta.get(lbl, {})
                writer.writerow([
                    role, lbl,
                    meta.get("country", ""), meta.get("industry", ""),
                    meta.get("sub_industry", ""), repr(sc),
                ])


def _row(report, lbl, score):
    meta = report.node_meta.get(lbl, {})
    return {
        "label": lbl,
        "country": meta.get("country", ""),
        "industry": meta.get("industry", ""),
        "sub_industry": meta.get("sub_industry", ""),
        "score": score,
    }
