"""Command-line front end over the same engine the HTTP service uses."""

from __future__ import annotations

import csv
import json
import os
import sys
from pathlib import Path
from typing import Optional

import click

from . import pipeline, rules as rules_mod
from .core import Dataset, HetvizError, MISSING, Scale
from .dsio import load_dataset, save_dataset
from .hyperblock import discover_pure_hbs, hb_to_json
from .ingest import (
    SchemeDocument,
    apply_scheme,
    bulk_assign,
    load_scheme,
    parse_csv,
    save_scheme,
)
from .render import RenderSpec, render_svg
from .viewlayout import ViewConfig


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except FileNotFoundError:
        _fail(f"file not found: {path}")
        raise  # unreachable; keeps type checkers happy


def _load_ds(path: str) -> Dataset:
    return load_dataset(_read_bytes(path))


def _view_config(ref: Optional[str], purity: float, min_size: float, small: float,
                 join: bool, sort: str, flips: str) -> ViewConfig:
    return ViewConfig(
        reference_attr=ref,
        purity_threshold=purity,
        min_block_size=min_size,
        small_block_threshold=small,
        join_nondominant=join,
        sort_mode=sort,
        flips=frozenset(f for f in flips.split(",") if f),
    )


@click.group()
def main() -> None:
    """Interpretable mixed-data coding, layout, and visualization workbench."""


@main.command()
@click.argument("csv_path")
@click.option("--scheme", "scheme_path", default=None, help="Coding scheme JSON (default: all-nominal).")
@click.option("--out", "out_path", required=True, help="Typed dataset output file.")
@click.option("--delimiter", default=",", show_default=True)
@click.option("--missing", default="?", show_default=True, help="Missing-value token.")
@click.option("--no-header", is_flag=True, help="Input has no header row.")
def ingest(csv_path: str, scheme_path: Optional[str], out_path: str,
           delimiter: str, missing: str, no_header: bool) -> None:
    """Parse a CSV file and apply a coding scheme, producing a typed dataset."""
    try:
        raw = parse_csv(
            _read_bytes(csv_path),
            delimiter=delimiter,
            has_header=not no_header,
            missing_token=missing,
        )
        scheme = (
            load_scheme(_read_bytes(scheme_path)).scheme
            if scheme_path
            else bulk_assign(raw, Scale.NOMINAL)
        )
        ds = apply_scheme(raw, scheme)
        Path(out_path).write_bytes(save_dataset(ds))
    except HetvizError as e:
        _fail(str(e))
    click.echo(f"wrote {out_path}: {len(ds.rows)} rows, {len(ds.attributes)} attributes")


@main.group()
def scheme() -> None:
    """Generate, validate, or apply coding schemes."""


@scheme.command("generate")
@click.argument("csv_path")
@click.option("--kind", type=click.Choice(["nominal", "ordinal"]), default="nominal", show_default=True)
@click.option("--out", "out_path", required=True)
@click.option("--delimiter", default=",", show_default=True)
@click.option("--missing", default="?", show_default=True)
@click.option("--no-header", is_flag=True)
def scheme_generate(csv_path: str, kind: str, out_path: str, delimiter: str,
                    missing: str, no_header: bool) -> None:
    """Bulk-assign one measurement type with integer codes 1..n per attribute."""
    try:
        raw = parse_csv(
            _read_bytes(csv_path),
            delimiter=delimiter,
            has_header=not no_header,
            missing_token=missing,
        )
        doc = SchemeDocument(scheme=bulk_assign(raw, Scale(kind)))
        Path(out_path).write_bytes(save_scheme(doc))
    except HetvizError as e:
        _fail(str(e))
    click.echo(f"wrote {out_path}")


@scheme.command("validate")
@click.argument("scheme_path")
def scheme_validate(scheme_path: str) -> None:
    """Check that a scheme document parses and is internally consistent."""
    try:
        doc = load_scheme(_read_bytes(scheme_path))
    except HetvizError as e:
        _fail(str(e))
    click.echo(f"ok: {len(doc.scheme.entries)} attribute entries, version {doc.version}")


@scheme.command("apply")
@click.argument("csv_path")
@click.option("--scheme", "scheme_path", required=True)
@click.option("--out", "out_path", required=True)
@click.option("--delimiter", default=",", show_default=True)
@click.option("--missing", default="?", show_default=True)
@click.option("--no-header", is_flag=True)
@click.pass_context
def scheme_apply(ctx: click.Context, csv_path: str, scheme_path: str, out_path: str,
                 delimiter: str, missing: str, no_header: bool) -> None:
    """Apply a scheme to a CSV file (same as ingest with --scheme)."""
    ctx.invoke(
        ingest,
        csv_path=csv_path,
        scheme_path=scheme_path,
        out_path=out_path,
        delimiter=delimiter,
        missing=missing,
        no_header=no_header,
    )


@main.command()
@click.argument("ds_path")
@click.option("--attr", required=True)
@click.option("--encoder", "encoder_kind", required=True,
              type=click.Choice(["one_hot", "label", "ordinal", "frequency",
                                 "mean_target", "prob_ratio", "james_stein",
                                 "hash", "wavelength"]))
@click.option("--dim", type=int, default=8, show_default=True, help="Hash dimension.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", default=None, help="CSV of generated columns (default stdout).")
def encode(ds_path: str, attr: str, encoder_kind: str, dim: int, seed: int,
           out_path: Optional[str]) -> None:
    """Encode one attribute and emit the generated columns as CSV."""
    from . import encoders

    try:
        ds = _load_ds(ds_path)
        fns = {
            "one_hot": lambda: encoders.one_hot(ds, attr),
            "label": lambda: encoders.label_encode(ds, attr),
            "ordinal": lambda: encoders.ordinal_encode(ds, attr),
            "frequency": lambda: encoders.frequency_encode(ds, attr),
            "mean_target": lambda: encoders.mean_target_encode(ds, attr),
            "prob_ratio": lambda: encoders.probability_ratio_encode(ds, attr),
            "james_stein": lambda: encoders.james_stein_encode(ds, attr),
            "hash": lambda: encoders.hash_encode(ds, attr, dim=dim, seed=seed),
            "wavelength": lambda: encoders.wavelength_color_encode(ds, attr),
        }
        result = fns[encoder_kind]()
    except HetvizError as e:
        _fail(str(e))

    out = open(out_path, "w", newline="", encoding="utf-8") if out_path else sys.stdout
    try:
        writer = csv.writer(out)
        names = list(result.columns)
        writer.writerow(names)
        for row in zip(*(result.columns[n] for n in names)):
            writer.writerow(["" if v is MISSING else v for v in row])
    finally:
        if out_path:
            out.close()
    if result.lossy_collisions:
        click.echo(
            f"note: {len(result.lossy_collisions)} code collision(s): "
            + "; ".join("{" + ", ".join(sorted(c)) + "}" for c in result.lossy_collisions),
            err=True,
        )
    if result.interpretability_note:
        click.echo(f"note: {result.interpretability_note}", err=True)


_layout_options = [
    click.option("--ref", default=None, help="Reference (class) attribute."),
    click.option("--purity", type=float, default=0.80, show_default=True),
    click.option("--min-size", type=float, default=0.10, show_default=True),
    click.option("--small", type=float, default=0.20, show_default=True,
                 help="Small-block threshold."),
    click.option("--join/--no-join", default=False, help="Join non-dominant class mass."),
    click.option("--sort", type=click.Choice(["frequency_desc", "purity", "color"]),
                 default="frequency_desc", show_default=True),
    click.option("--flips", default="", help="Comma-separated attributes to flip."),
]


def _with_layout_options(fn):
    for opt in reversed(_layout_options):
        fn = opt(fn)
    return fn


@main.command()
@click.argument("ds_path")
@_with_layout_options
@click.option("--out", "out_path", default=None, help="Layout JSON output (default stdout).")
def layout(ds_path: str, ref: Optional[str], purity: float, min_size: float, small: float,
           join: bool, sort: str, flips: str, out_path: Optional[str]) -> None:
    """Compute the axis layouts, edges, and report for a typed dataset."""
    try:
        ds = _load_ds(ds_path)
        bundle = pipeline.compute_view(
            ds, _view_config(ref, purity, min_size, small, join, sort, flips)
        )
    except HetvizError as e:
        _fail(str(e))
    text = json.dumps(pipeline.bundle_to_json(bundle), indent=2)
    if out_path:
        Path(out_path).write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote {out_path}")
    else:
        click.echo(text)


@main.command()
@click.argument("ds_path")
@_with_layout_options
@click.option("--out", "out_path", default=None, help="Report text output (default stdout).")
@click.option("--bars", "bars_path", default=None, help="Write per-bar statistics CSV.")
@click.option("--fig", "fig_path", default=None, help="Write a layout overview figure (PNG/SVG).")
def report(ds_path: str, ref: Optional[str], purity: float, min_size: float, small: float,
           join: bool, sort: str, flips: str, out_path: Optional[str],
           bars_path: Optional[str], fig_path: Optional[str]) -> None:
    """Generate the linguistic block report, with optional bar stats and figure."""
    try:
        ds = _load_ds(ds_path)
        bundle = pipeline.compute_view(
            ds, _view_config(ref, purity, min_size, small, join, sort, flips),
            with_edges=False,
        )
    except HetvizError as e:
        _fail(str(e))

    text = "\n".join(bundle.report)
    if out_path:
        Path(out_path).write_text(text + ("\n" if text else ""), encoding="utf-8")
    else:
        click.echo(text)

    if bars_path:
        with open(bars_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["attribute", "block", "group", "total", "dominant", "purity", "height"])
            for layout_ in bundle.layouts:
                for i, bar in enumerate(layout_.bars, start=1):
                    writer.writerow(
                        [layout_.attribute, i, bar.value_group, bar.total,
                         bar.dominant_class or "", f"{bar.purity:.6f}", f"{bar.height_fraction:.6f}"]
                    )
        click.echo(f"wrote {bars_path}", err=True)

    if fig_path:
        from .figures import save_layout_figure

        class_order = ds.class_labels() if ds.target_index is not None else ()
        save_layout_figure(bundle.layouts, Path(fig_path), class_order=class_order)
        click.echo(f"wrote {fig_path}", err=True)


@main.group()
def hb() -> None:
    """Hyperblock discovery and inspection."""


@hb.command("discover")
@click.argument("ds_path")
@click.option("--out", "out_path", default=None, help="Hyperblocks JSON output (default stdout).")
def hb_discover(ds_path: str, out_path: Optional[str]) -> None:
    """Find pure hyperblocks covering every non-conflicted row."""
    try:
        ds = _load_ds(ds_path)
        blocks = discover_pure_hbs(ds)
    except HetvizError as e:
        _fail(str(e))
    text = json.dumps({"hyperblocks": [hb_to_json(b) for b in blocks]}, indent=2)
    if out_path:
        Path(out_path).write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote {out_path}: {len(blocks)} pure hyperblocks")
    else:
        click.echo(text)


@main.group()
def rule() -> None:
    """Rule validation and evaluation."""


@rule.command("eval")
@click.argument("ds_path")
@click.option("--rule", "rule_path", required=True, help="Rule JSON file.")
def rule_eval(ds_path: str, rule_path: str) -> None:
    """Validate a rule and report its coverage and precision on a dataset."""
    try:
        ds = _load_ds(ds_path)
        r = rules_mod.loads(_read_bytes(rule_path).decode("utf-8"))
        violations = rules_mod.validate_rule(r, ds)
        if violations:
            for v in violations:
                click.echo(
                    f"violation: {v.relation.value} forbidden on {v.attr!r}: {v.reason}",
                    err=True,
                )
            sys.exit(1)
        metrics, _ = rules_mod.classify(r, ds)
    except HetvizError as e:
        _fail(str(e))
    click.echo(
        json.dumps(
            {
                "coverage": metrics.coverage,
                "correct": metrics.correct,
                "precision": metrics.precision,
                "error_rate": metrics.error_rate,
            },
            indent=2,
        )
    )


@main.command()
@click.argument("ds_path")
@_with_layout_options
@click.option("--mode", type=click.Choice(["lossless_polylines", "aggregated_edges"]),
              default="lossless_polylines", show_default=True)
@click.option("--out", "out_path", required=True, help="SVG output file.")
def render(ds_path: str, ref: Optional[str], purity: float, min_size: float, small: float,
           join: bool, sort: str, flips: str, mode: str, out_path: str) -> None:
    """Render the parallel-coordinates view to a deterministic SVG file."""
    try:
        ds = _load_ds(ds_path)
        config = _view_config(ref, 0.0, 0.0, small, join, sort, flips)
        bundle = pipeline.compute_view(ds, config)
        svg = render_svg(
            ds,
            config,
            bundle.layouts,
            edges=bundle.edges,
            spec=RenderSpec(mode=mode, frame_threshold=purity),
        )
    except HetvizError as e:
        _fail(str(e))
    Path(out_path).write_text(svg, encoding="utf-8")
    click.echo(f"wrote {out_path}")


@main.command()
@click.option("--port", type=int, default=None, help="Default: HETVIZ_PORT or 8000.")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port: Optional[int], host: str) -> None:
    """Run the HTTP API for the companion UI."""
    import uvicorn

    from .service import create_app

    if port is None:
        port = int(os.environ.get("HETVIZ_PORT", "8000"))
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
