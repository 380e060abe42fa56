"""Command-line front end: ingestion -> discretization -> matrices -> graphs,
centralities, embeddings, and crisis-flow reports."""

from __future__ import annotations

import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from . import flows as flows_mod
from . import netmetrics, surrogate, synth
from .discretize import GLOBAL, PER_SERIES, fit_bins, symbolize
from .embed import classical_mds, refine, save_embedding_csv
from .errors import EtenetError, InvalidParams, MissingArtifact
from .infotheory import shannon_entropy, te_matrix
from .matrices import load_matrix_csv, save_matrix_csv
from .panel import (
    augment_lagged,
    build_panel,
    load_calendar_csv,
    load_panel_csv,
    load_series_from_manifest,
    save_panel_csv,
)

DEFAULT_ETE_THRESHOLDS = (0.05, 0.1, 0.2, 0.3, 0.4)
DEFAULT_DISTANCE_THRESHOLD = 1.2


@dataclass
class RunConfig:
    manifest: str
    calendar: str
    bin_width: float = 0.1
    bin_mode: str = GLOBAL
    k: int = 1
    l: int = 1
    surrogates: int = 25
    noise_sims: int = 1000
    seed: int = 0
    thresholds: tuple = DEFAULT_ETE_THRESHOLDS
    distance_threshold: float = DEFAULT_DISTANCE_THRESHOLD
    top_k: int = 5
    out_dir: str = "out"
    max_lag: int = 1

    def __post_init__(self):
        self.thresholds = tuple(float(t) for t in self.thresholds)

    def validate(self):
        if self.bin_width <= 0:
            raise InvalidParams("bin width must be positive")
        if self.bin_mode not in (GLOBAL, PER_SERIES):
            raise InvalidParams(f"unknown bin mode {self.bin_mode!r}")
        if not (1 <= self.k <= 4 and 1 <= self.l <= 4):
            raise InvalidParams("k and l must be in 1..4")
        if self.surrogates < 1 or self.noise_sims < 1:
            raise InvalidParams("surrogate counts must be positive")
        if self.top_k < 1:
            raise InvalidParams("top_k must be positive")
        if self.max_lag < 0:
            raise InvalidParams("max_lag must be non-negative")

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))


def _node_meta(panel):
    return {c.label: dict(c.meta, lag=c.lag) for c in panel.columns}


def _load_panel_inputs(cfg: RunConfig):
    series = load_series_from_manifest(cfg.manifest)
    cal = load_calendar_csv(cfg.calendar)
    panel = build_panel(series, cal)
    if cfg.max_lag >= 1:
        panel = augment_lagged(panel, cfg.max_lag)
    return series, cal, panel


def run_pipeline(cfg: RunConfig) -> dict:
    """Run every stage and write all artifacts; returns {name: path}."""
    cfg.validate()
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = {}

    def record(name, path):
        artifacts[name] = str(path)
        return path

    _, _, panel = _load_panel_inputs(cfg)
    save_panel_csv(panel, record("panel", out / "panel.csv"))
    meta = _node_meta(panel)

    spec = fit_bins(panel.values, cfg.bin_width, GLOBAL)
    _write_entropy_report(panel, cfg, record("entropy", out / "entropy.csv"))

    corr = netmetrics.pearson_matrix(panel)
    dist = netmetrics.correlation_distance(corr)
    te = te_matrix(panel, spec, k=cfg.k, l=cfg.l)
    plan = surrogate.SurrogatePlan(cfg.surrogates, cfg.seed)
    rte = surrogate.rte_matrix(panel, spec, k=cfg.k, l=cfg.l, plan=plan)
    ete = surrogate.ete_matrix(te, rte)
    nte = surrogate.nte_matrix(ete, panel, spec)
    ntedist = netmetrics.nte_distance(nte)
    for name, mat in (("correlation", corr), ("distance", dist), ("te", te),
                      ("rte", rte), ("ete", ete), ("nte", nte),
                      ("nte_distance", ntedist)):
        save_matrix_csv(mat, record(name, out / f"{name}.csv"),
                        meta={"seed": cfg.seed})

    # asset graphs + centralities
    dgraph = netmetrics.asset_graph(dist, cfg.distance_threshold, node_meta=meta)
    _write_graph(dgraph, out, f"graph_distance_{cfg.distance_threshold:g}", record)
    if dgraph.nodes:
        rep = netmetrics.centralities(graph=dgraph, matrix=corr)
        _write_centrality(rep, out, f"centrality_distance_{cfg.distance_threshold:g}", record)
    for t in cfg.thresholds:
        egraph = netmetrics.asset_graph(ete, t, node_meta=meta)
        _write_graph(egraph, out, f"graph_ete_{t:g}", record)
        if egraph.nodes:
            rep = netmetrics.centralities(graph=egraph, matrix=ete)
            _write_centrality(rep, out, f"centrality_ete_{t:g}", record)

    # embeddings
    for name, mat in (("correlation", dist), ("nte", ntedist)):
        emb = refine(classical_mds(mat, m=2), mat)
        save_embedding_csv(emb, record(f"embedding_{name}", out / f"embedding_{name}.csv"),
                           node_meta=meta)

    # noise floor from column-permuted real returns
    floor = surrogate.correlation_noise_floor(
        surrogate.SurrogatePlan(cfg.noise_sims, cfg.seed),
        panel=panel, generator="permute-real-panel")
    record("noise_floor", out / "noise_floor.json")
    (out / "noise_floor.json").write_text(json.dumps({
        "min_distance_mean": floor["min_distance_mean"],
        "min_distance_std": floor["min_distance_std"],
        "n_sims": cfg.noise_sims,
        "seed": cfg.seed,
    }, indent=2))

    manifest = {
        "config": json.loads(cfg.to_json()),
        "binning": {"lo": spec.lo, "hi": spec.hi, "width": spec.width,
                    "n_bins": spec.n_bins, "mode": spec.mode},
        "artifacts": artifacts,
    }
    (out / "run_manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    artifacts["run_manifest"] = str(out / "run_manifest.json")
    return artifacts


def _write_entropy_report(panel, cfg, path):
    import csv as _csv

    with open(path, "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["label", "entropy_bits"])
        for j, lbl in enumerate(panel.labels):
            col = panel.values[:, j]
            if cfg.bin_mode == PER_SERIES:
                spec = fit_bins(col, cfg.bin_width, PER_SERIES)
            else:
                spec = fit_bins(panel.values, cfg.bin_width, GLOBAL)
            writer.writerow([lbl, repr(shannon_entropy(symbolize(col, spec)))])


def _write_graph(graph, out, stem, record):
    netmetrics.save_graph_dot(graph, record(stem + "_dot", out / f"{stem}.dot"))
    netmetrics.save_graph_edge_csv(graph, record(stem + "_edges", out / f"{stem}.edges.csv"))


def _write_centrality(report, out, stem, record):
    netmetrics.save_centrality_report(report, record(stem, out / f"{stem}.csv"), fmt="csv")
    netmetrics.save_centrality_report(report, record(stem + "_json", out / f"{stem}.json"),
                                      fmt="json")


# ---------------------------------------------------------------------------
# click wiring
# ---------------------------------------------------------------------------

@click.group()
def main():
    """Directed information-flow networks from financial time series."""


def _common_panel_opts(f):
    f = click.option("--manifest", required=True, type=click.Path(exists=True))(f)
    f = click.option("--calendar", required=True, type=click.Path(exists=True))(f)
    f = click.option("--max-lag", default=1, show_default=True)(f)
    return f


@main.command("pipeline")
@_common_panel_opts
@click.option("--bin-width", default=0.1, show_default=True)
@click.option("--bin-mode", type=click.Choice([GLOBAL, PER_SERIES]), default=GLOBAL,
              show_default=True)
@click.option("--k", default=1, show_default=True)
@click.option("--l", default=1, show_default=True)
@click.option("--surrogates", default=25, show_default=True)
@click.option("--noise-sims", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--threshold", "thresholds", multiple=True, type=float,
              help="ETE graph threshold (repeatable); defaults 0.05 0.1 0.2 0.3 0.4.")
@click.option("--distance-threshold", default=DEFAULT_DISTANCE_THRESHOLD, show_default=True)
@click.option("--top", "top_k", default=5, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def cmd_pipeline(manifest, calendar, max_lag, bin_width, bin_mode, k, l, surrogates,
                 noise_sims, seed, thresholds, distance_threshold, top_k, out_dir):
    """Run the full pipeline and write every artifact."""
    cfg = RunConfig(
        manifest=manifest, calendar=calendar, bin_width=bin_width, bin_mode=bin_mode,
        k=k, l=l, surrogates=surrogates, noise_sims=noise_sims, seed=seed,
        thresholds=tuple(thresholds) or DEFAULT_ETE_THRESHOLDS,
        distance_threshold=distance_threshold, top_k=top_k, out_dir=out_dir,
        max_lag=max_lag,
    )
    try:
        artifacts = run_pipeline(cfg)
    except EtenetError as exc:
        raise click.ClickException(f"pipeline: {exc}")
    click.echo(f"wrote {len(artifacts)} artifacts to {out_dir}")


@main.command("panel")
@_common_panel_opts
@click.option("--out", default="panel.csv", show_default=True)
def cmd_panel(manifest, calendar, max_lag, out):
    """Build the lag-augmented log-return panel."""
    try:
        series = load_series_from_manifest(manifest)
        cal = load_calendar_csv(calendar)
        panel = build_panel(series, cal)
        if max_lag >= 1:
            panel = augment_lagged(panel, max_lag)
        save_panel_csv(panel, out)
    except EtenetError as exc:
        raise click.ClickException(f"panel: {exc}")
    click.echo(f"{panel.n_rows} x {panel.n_cols} panel -> {out}")


@main.command("te")
@click.option("--panel", "panel_path", required=True, type=click.Path(exists=True))
@click.option("--bin-width", default=0.1, show_default=True)
@click.option("--k", default=1, show_default=True)
@click.option("--l", default=1, show_default=True)
@click.option("--out", default="te.csv", show_default=True)
def cmd_te(panel_path, bin_width, k, l, out):
    """Transfer Entropy matrix from a saved panel."""
    try:
        panel = load_panel_csv(panel_path)
        spec = fit_bins(panel.values, bin_width, GLOBAL)
        save_matrix_csv(te_matrix(panel, spec, k=k, l=l), out)
    except EtenetError as exc:
        raise click.ClickException(f"te: {exc}")
    click.echo(f"te matrix -> {out}")


@main.command("ete")
@click.option("--panel", "panel_path", required=True, type=click.Path(exists=True))
@click.option("--bin-width", default=0.1, show_default=True)
@click.option("--k", default=1, show_default=True)
@click.option("--l", default=1, show_default=True)
@click.option("--surrogates", default=25, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def cmd_ete(panel_path, bin_width, k, l, surrogates, seed, out_dir):
    """TE, RTE, ETE, and NTE matrices from a saved panel."""
    try:
        panel = load_panel_csv(panel_path)
        spec = fit_bins(panel.values, bin_width, GLOBAL)
        te = te_matrix(panel, spec, k=k, l=l)
        plan = surrogate.SurrogatePlan(surrogates, seed)
        rte = surrogate.rte_matrix(panel, spec, k=k, l=l, plan=plan)
        ete = surrogate.ete_matrix(te, rte)
        nte = surrogate.nte_matrix(ete, panel, spec)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, mat in (("te", te), ("rte", rte), ("ete", ete), ("nte", nte)):
            save_matrix_csv(mat, out / f"{name}.csv", meta={"seed": seed})
    except EtenetError as exc:
        raise click.ClickException(f"ete: {exc}")
    click.echo(f"te/rte/ete/nte -> {out_dir}")


@main.command("graph")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True))
@click.option("--threshold", required=True, type=float)
@click.option("--out", "out_stem", default="graph", show_default=True)
def cmd_graph(matrix_path, threshold, out_stem):
    """Thresholded asset graph (DOT + edge list) from a saved matrix."""
    try:
        mat = load_matrix_csv(matrix_path)
        graph = netmetrics.asset_graph(mat, threshold)
        netmetrics.save_graph_dot(graph, out_stem + ".dot")
        netmetrics.save_graph_edge_csv(graph, out_stem + ".edges.csv")
    except EtenetError as exc:
        raise click.ClickException(f"graph: {exc}")
    click.echo(f"{len(graph.edges)} edges, {graph.n} nodes -> {out_stem}.dot")


@main.command("centrality")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True))
@click.option("--threshold", required=True, type=float)
@click.option("--out", default="centrality.csv", show_default=True)
def cmd_centrality(matrix_path, threshold, out):
    """Centrality report for the asset graph at a threshold."""
    try:
        mat = load_matrix_csv(matrix_path)
        graph = netmetrics.asset_graph(mat, threshold)
        rep = netmetrics.centralities(graph=graph, matrix=mat)
        netmetrics.save_centrality_report(rep, out)
    except EtenetError as exc:
        raise click.ClickException(f"centrality: {exc}")
    click.echo(f"centralities for {graph.n} nodes -> {out}")


@main.command("embed")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True))
@click.option("--dims", default=2, show_default=True)
@click.option("--out", default="coords.csv", show_default=True)
def cmd_embed(matrix_path, dims, out):
    """2D (or 3D) coordinates from a distance matrix."""
    try:
        mat = load_matrix_csv(matrix_path)
        emb = refine(classical_mds(mat, m=dims), mat)
        save_embedding_csv(emb, out)
    except EtenetError as exc:
        raise click.ClickException(f"embed: {exc}")
    click.echo(f"stress {emb.stress:.4g} -> {out}")


@main.command("noise-floor")
@click.option("--panel", "panel_path", type=click.Path(exists=True))
@click.option("--rows", type=int, help="T for the Gaussian generator.")
@click.option("--cols", type=int, help="N for the Gaussian generator.")
@click.option("--noise-sims", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default="noise_floor.json", show_default=True)
def cmd_noise_floor(panel_path, rows, cols, noise_sims, seed, out):
    """Minimum correlation distance expected from causality-destroying shuffles."""
    plan = surrogate.SurrogatePlan(noise_sims, seed)
    try:
        if panel_path:
            panel = load_panel_csv(panel_path)
            floor = surrogate.correlation_noise_floor(
                plan, panel=panel, generator="permute-real-panel")
        elif rows and cols:
            floor = surrogate.correlation_noise_floor(
                plan, shape=(rows, cols), generator="gaussian")
        else:
            raise click.ClickException("noise-floor: give --panel or --rows/--cols")
        Path(out).write_text(json.dumps({
            "min_distance_mean": floor["min_distance_mean"],
            "min_distance_std": floor["min_distance_std"],
            "n_sims": noise_sims,
            "seed": seed,
        }, indent=2))
    except EtenetError as exc:
        raise click.ClickException(f"noise-floor: {exc}")
    click.echo(f"{floor['min_distance_mean']:.4f} +/- {floor['min_distance_std']:.4f} -> {out}")


@main.command("crisis")
@_common_panel_opts
@click.option("--group-name", required=True)
@click.option("--group-manifest", required=True, type=click.Path(exists=True),
              help="Manifest of the group's own series to append.")
@click.option("--remove", "remove_labels", multiple=True,
              help="Base-panel labels to drop (repeatable).")
@click.option("--bin-width", default=0.1, show_default=True)
@click.option("--surrogates", default=25, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--top", "top_k", default=5, show_default=True)
@click.option("--out", "out_dir", default="out", show_default=True)
def cmd_crisis(manifest, calendar, max_lag, group_name, group_manifest, remove_labels,
               bin_width, surrogates, seed, top_k, out_dir):
    """Group swap-in analysis: summed-flow send/receive rankings."""
    try:
        base = load_series_from_manifest(manifest)
        cal = load_calendar_csv(calendar)
        group = flows_mod.GroupSpec(group_name, tuple(remove_labels),
                                    tuple(load_series_from_manifest(group_manifest)))
        panel = flows_mod.build_group_panel(base, group, cal, max_lag=max(max_lag, 1))
        spec = fit_bins(panel.values, bin_width, GLOBAL)
        te = te_matrix(panel, spec)
        plan = surrogate.SurrogatePlan(surrogates, seed)
        rte = surrogate.rte_matrix(panel, spec, plan=plan)
        ete = surrogate.ete_matrix(te, rte)
        report = flows_mod.flow_report(ete, group, top_k=top_k,
                                       node_meta=_node_meta(panel))
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        flows_mod.save_flow_report(report, out / f"flows_{group_name}.csv")
        flows_mod.save_flow_report(report, out / f"flows_{group_name}.json", fmt="json")
        save_matrix_csv(ete, out / f"ete_{group_name}.csv", meta={"seed": seed})
    except EtenetError as exc:
        raise click.ClickException(f"crisis: {exc}")
    click.echo(f"flow report for {group_name} -> {out_dir}")


@main.command("synth")
@click.option("--kind", type=click.Choice(["bsc", "ar1", "var1"]), required=True)
@click.option("--t", "t_len", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--epsilon", default=0.1, show_default=True, help="bsc flip probability")
@click.option("--phi", default=0.9, show_default=True, help="ar1 coefficient")
@click.option("--n", "n_vars", default=4, show_default=True, help="var1 dimension")
@click.option("--density", default=0.3, show_default=True, help="var1 coupling density")
@click.option("--radius", default=0.8, show_default=True, help="var1 spectral radius")
@click.option("--out", "out_dir", default="synth", show_default=True)
def cmd_synth(kind, t_len, seed, epsilon, phi, n_vars, density, radius, out_dir):
    """Generate synthetic series with a known coupling ground truth."""
    try:
        if kind == "bsc":
            series, truth = synth.gen_bsc(t_len, epsilon, seed)
        elif kind == "ar1":
            series, truth = synth.gen_ar1(t_len, phi, seed)
        else:
            C = synth.make_coupling(n_vars, density, radius, seed)
            series, truth = synth.gen_var1(t_len, C, seed)
    except EtenetError as exc:
        raise click.ClickException(f"synth: {exc}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dates = synth.iso_dates(t_len + 1)
    import csv as _csv

    with open(out / "manifest.csv", "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["ticker", "file", "country", "industry", "sub_industry"])
        for lbl, rets in series.items():
            prices = synth.returns_to_prices(np.asarray(rets))
            fname = f"{lbl}.csv"
            with open(out / fname, "w", newline="") as sfh:
                swriter = _csv.writer(sfh)
                swriter.writerow(["date", "close"])
                for d, p in zip(dates, prices):
                    swriter.writerow([d, repr(float(p))])
            writer.writerow([lbl, fname, "synthetic", kind, kind])
    with open(out / "calendar.csv", "w", newline="") as fh:
        writer = _csv.writer(fh)
        writer.writerow(["date"])
        for d in dates:
            writer.writerow([d])
    (out / "ground_truth.json").write_text(json.dumps(truth, indent=2))
    click.echo(f"{len(series)} series -> {out_dir}")


@main.command("report")
@click.option("--run-dir", required=True, type=click.Path(exists=True))
@click.option("--top", "top_k", default=5, show_default=True)
@click.option("--out", "out_path", default=None, help="Optional CSV destination.")
def cmd_report(run_dir, top_k, out_path):
    """Top-K centrality tables (ties included) from prior pipeline outputs."""
    run_dir = Path(run_dir)
    manifest_path = run_dir / "run_manifest.json"
    if not manifest_path.exists():
        raise click.ClickException(f"report: {MissingArtifact(manifest_path)}")
    panel_meta = {}
    sidecar = run_dir / "panel.csv.meta.json"
    if sidecar.exists():
        cols = json.loads(sidecar.read_text())["columns"]
        panel_meta = {c["label"]: c.get("meta", {}) for c in cols}
    cent_files = sorted(run_dir.glob("centrality_*.json"))
    if not cent_files:
        raise click.ClickException("report: no centrality artifacts in run dir")
    rows = []
    for path in cent_files:
        data = json.loads(path.read_text())
        rep = netmetrics.CentralityReport(
            data["nodes"], {m: np.array(v) for m, v in data["values"].items()})
        graph_name = path.stem.replace("centrality_", "")
        for measure in sorted(rep.values):
            for lbl, val in rep.top(measure, k=top_k):
                meta = panel_meta.get(lbl, {})
                rows.append([graph_name, measure, lbl, meta.get("country", ""),
                             meta.get("industry", ""), meta.get("sub_industry", ""),
                             f"{val:.6g}"])
    header = ["graph", "measure", "label", "country", "industry", "sub_industry", "value"]
    if out_path:
        import csv as _csv

        with open(out_path, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    click.echo("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for r in rows:
        click.echo("  ".join(str(v).ljust(w) for v, w in zip(r, widths)))


if __name__ == "__main__":
    sys.exit(main())
