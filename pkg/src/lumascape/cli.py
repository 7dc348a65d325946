"""Command-line pipeline: analyze, synthesize, render, stats, pipeline, serve.

Exit codes: 0 success, 2 input error, 3 validation error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import __version__
from .audio import AudioAnalyzer
from .config import PipelineConfig, load_config
from .errors import InputError, LumascapeError, ValidationError
from .model import (deserialize, deserialize_analysis, serialize,
                    serialize_analysis)
from .render import (color_ratios, default_venue, frames_to_csv,
                     frames_to_raw, load_fixtures, palette_bins, ratios_to_csv,
                     render_all)
from .stats import load_ratings_csv, report_to_csv, report_to_markdown, \
    run_evaluation
from .synth import synthesize
from .video import extract_palette, ingest_frames, select_salient_segment

EXIT_INPUT_ERROR = 2
EXIT_VALIDATION_ERROR = 3


def _fail(exc: LumascapeError):
    click.echo(f"error [{exc.code}]: {exc}", err=True)
    if isinstance(exc, ValidationError):
        for v in exc.violations:
            click.echo(f"  - {v.code}: {v.message} ({v.path})", err=True)
        sys.exit(EXIT_VALIDATION_ERROR)
    sys.exit(EXIT_INPUT_ERROR)


def _run(fn):
    try:
        fn()
    except ValidationError as exc:
        _fail(exc)
    except LumascapeError as exc:
        _fail(exc)
    except FileNotFoundError as exc:
        _fail(InputError(f"file not found: {exc.filename}", code="missing-file"))


def _load_pipeline_config(config_path, seed):
    cfg = load_config(config_path)
    if seed is not None:
        from dataclasses import replace
        cfg = replace(cfg, seed=seed)
    return cfg


def _analyzer(cfg: PipelineConfig) -> AudioAnalyzer:
    a = cfg.analysis
    return AudioAnalyzer(sample_rate=a.sample_rate, window=a.window, hop=a.hop,
                         bpm_min=a.bpm_min, bpm_max=a.bpm_max,
                         stem_files=a.stem_files, segment_file=a.segment_file)


def _venue(cfg: PipelineConfig):
    return load_fixtures(cfg.render.fixtures) if cfg.render.fixtures \
        else default_venue()


@click.group()
@click.version_option(version=__version__, prog_name="lumascape")
def main():
    """Ambient lightscape synthesis for music videos."""


@main.command()
@click.option("--audio", required=True, type=click.Path(), help="input WAV")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True, type=click.Path(), help="analysis JSON out")
def analyze(audio, config_path, seed, out):
    """Run audio analysis and write the analysis document."""
    def go():
        cfg = _load_pipeline_config(config_path, seed)
        result = _analyzer(cfg).analyze_file(audio)
        result.provenance.update(cfg.provenance(__version__))
        Path(out).write_bytes(serialize_analysis(result))
        click.echo(f"analysis written to {out} "
                   f"(bpm {result.beat_grid.bpm:.2f}, "
                   f"{len(result.segments)} segments)")
    _run(go)


@main.command()
@click.option("--analysis", "analysis_path", required=True, type=click.Path())
@click.option("--frames", "frames_path", required=True, type=click.Path(),
              help="image-sequence dir or LUMARAW1 stream")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True, type=click.Path(), help="lightscape JSON out")
def synthesize_cmd(analysis_path, frames_path, config_path, seed, out):
    """Extract the palette from the hottest segment and synthesize light
    objects."""
    def go():
        cfg = _load_pipeline_config(config_path, seed)
        analysis = deserialize_analysis(Path(analysis_path).read_bytes())
        hottest = select_salient_segment(analysis.segments)
        frames = ingest_frames(frames_path, hottest,
                               max_frames=cfg.video.max_frames,
                               max_width=cfg.video.max_width)
        palette = extract_palette(frames, n_colors=cfg.video.n_colors)
        ls = synthesize(analysis, palette, cfg.synthesis,
                        provenance=cfg.provenance(__version__))
        Path(out).write_bytes(serialize(ls))
        click.echo(f"lightscape written to {out} ({len(ls.objects)} objects)")
    _run(go)


main.add_command(synthesize_cmd, name="synthesize")


@main.command()
@click.option("--lightscape", "lightscape_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--fps", type=float, default=None, help="override config fps")
@click.option("--out", required=True, type=click.Path(),
              help="output prefix; writes <out>.frames.csv and <out>.ratios.csv")
@click.option("--raw", "raw_out", type=click.Path(), default=None,
              help="also write a LUMARAW1 stream here")
def render(lightscape_path, config_path, fps, out, raw_out):
    """Render the document onto the virtual venue and export CSVs."""
    def go():
        cfg = _load_pipeline_config(config_path, None)
        venue = _venue(cfg)
        the_fps = fps if fps is not None else cfg.render.fps
        ls = deserialize(Path(lightscape_path).read_bytes())
        frames = list(render_all(ls, venue, the_fps))
        Path(f"{out}.frames.csv").write_text(frames_to_csv(frames, venue),
                                             encoding="utf-8")
        rows = color_ratios(frames, palette_bins(ls))
        Path(f"{out}.ratios.csv").write_text(ratios_to_csv(rows), encoding="utf-8")
        if raw_out:
            Path(raw_out).write_bytes(frames_to_raw(frames, the_fps))
        click.echo(f"rendered {len(frames)} frames at {the_fps:g} fps to "
                   f"{out}.frames.csv / {out}.ratios.csv")
    _run(go)


@main.command()
@click.option("--ratings", "ratings_path", required=True, type=click.Path())
@click.option("--level", type=click.Choice(["context", "rater"]),
              default="context")
@click.option("--out", required=True, type=click.Path(),
              help="output prefix; writes <out>.md and <out>.csv")
def stats(ratings_path, level, out):
    """Signed-rank evaluation report from a paired ratings CSV."""
    def go():
        table = load_ratings_csv(ratings_path)
        report = run_evaluation(table, level=level)
        Path(f"{out}.md").write_text(report_to_markdown(report), encoding="utf-8")
        Path(f"{out}.csv").write_text(report_to_csv(report), encoding="utf-8")
        click.echo(f"stats report written to {out}.md / {out}.csv")
    _run(go)


@main.command()
@click.option("--audio", required=True, type=click.Path())
@click.option("--frames", "frames_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True, type=click.Path(),
              help="output prefix for all artifacts")
def pipeline(audio, frames_path, config_path, seed, out):
    """analyze -> synthesize -> render in one pass."""
    def go():
        cfg = _load_pipeline_config(config_path, seed)
        result = _analyzer(cfg).analyze_file(audio)
        result.provenance.update(cfg.provenance(__version__))
        Path(f"{out}.analysis.json").write_bytes(serialize_analysis(result))

        hottest = select_salient_segment(result.segments)
        frames = ingest_frames(frames_path, hottest,
                               max_frames=cfg.video.max_frames,
                               max_width=cfg.video.max_width)
        palette = extract_palette(frames, n_colors=cfg.video.n_colors)
        ls = synthesize(result, palette, cfg.synthesis,
                        provenance=cfg.provenance(__version__))
        Path(f"{out}.lightscape.json").write_bytes(serialize(ls))

        venue = _venue(cfg)
        rendered = list(render_all(ls, venue, cfg.render.fps))
        Path(f"{out}.frames.csv").write_text(frames_to_csv(rendered, venue),
                                             encoding="utf-8")
        rows = color_ratios(rendered, palette_bins(ls))
        Path(f"{out}.ratios.csv").write_text(ratios_to_csv(rows), encoding="utf-8")
        click.echo(f"pipeline artifacts written with prefix {out}")
    _run(go)


@main.command()
@click.option("--lightscape", "lightscape_path", required=True, type=click.Path())
@click.option("--audio", "audio_path", type=click.Path(), default=None)
@click.option("--analysis", "analysis_path", type=click.Path(), default=None)
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--ui", "ui_dir", type=click.Path(), default=None,
              help="serve a static editor build from this directory")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8787)
def serve(lightscape_path, audio_path, analysis_path, config_path, ui_dir,
          host, port):
    """Serve the co-creation API (and optionally the editor UI)."""
    def go():
        from .service import make_server, serve_forever
        cfg = _load_pipeline_config(config_path, None)
        try:
            server = make_server(lightscape_path, audio_path=audio_path,
                                 analysis_path=analysis_path,
                                 fixtures=_venue(cfg), ui_dir=ui_dir,
                                 host=host, port=port)
        except OSError as exc:
            raise InputError(f"cannot bind {host}:{port}: {exc}",
                             code="port-in-use") from exc
        click.echo(f"serving on http://{host}:{server.server_address[1]}/")
        serve_forever(server)
    _run(go)


if __name__ == "__main__":
    main()
