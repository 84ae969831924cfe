"""Command-line front end.

Exit status reports whether the command ran, not what it decided:
0 success, 2 I/O or format problems, 3 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import netpbm
from .edges import EdgeConfig
from .errors import ConfigError, PolypGateError
from .evaluation import (
    SUITE_SEED,
    PhantomSpec,
    evaluate,
    generate_phantom,
    load_image,
    load_labels,
    phantom_suite,
    write_suite,
)
from .pcm import PcmConfig
from .pipeline import PipelineConfig, detect_image
from .stream_sim import directory_frames, manifest_entries, manifest_frames, run_stream

log = logging.getLogger("polypgate")

EXIT_OK = 0
EXIT_IO = 2
EXIT_CONFIG = 3


class CliError(Exception):
    def __init__(self, message, status=EXIT_IO):
        super().__init__(message)
        self.status = status


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("detector configuration")
    g.add_argument("--a", type=int, default=16, help="inner PCM window (default 16)")
    g.add_argument("--b", type=int, default=64, help="outer PCM window (default 64)")
    g.add_argument("--centering", choices=("symmetric", "low"), default="symmetric",
                   help="even-window placement for the contrast mask (default symmetric)")
    g.add_argument("--tau1", type=int, default=2, help="minimum edge step (default 2)")
    g.add_argument("--tau2", type=int, default=100, help="dark-side ceiling (default 100)")
    g.add_argument("--threshold", type=int, default=500,
                   help="final-mask pixels needed to call a frame informative (default 500)")
    g.add_argument("--scale-threshold", action="store_true",
                   help="scale the threshold with frame area relative to 320x320")
    g.add_argument("--no-lookback", action="store_true",
                   help="only accept fusion triggers lying on the PCM run itself")


def _add_jobs(p):
    p.add_argument("--jobs", type=int, default=1, help="worker threads (default 1)")


def config_from_args(args) -> PipelineConfig:
    return PipelineConfig(
        pcm=PcmConfig(a=args.a, b=args.b, centering=args.centering),
        edge=EdgeConfig(tau1=args.tau1, tau2=args.tau2),
        area_threshold=args.threshold,
        scale_threshold_with_area=args.scale_threshold,
        lookback=not args.no_lookback,
    )


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def dump_stages(report, stem: str, out_dir: Path) -> list[Path]:
    """Write every intermediate mask as ``<stem>.<stage>.pgm``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    st = report.stages
    planes = {"pcm": st.pcm}
    for name, plane in st.edges.planes().items():
        planes[f"edge.{name}"] = plane
    planes["hmask"] = st.fusion.h_mask
    planes["vmask"] = st.fusion.v_mask
    planes["final"] = st.fusion.final_mask
    written = []
    for name, plane in planes.items():
        path = out_dir / f"{stem}.{name}.pgm"
        netpbm.write_mask(path, plane)
        written.append(path)
    return written


def _detect_path(path: Path, cfg, dump: bool, out_dir: Path | None):
    image = load_image(path)
    report = detect_image(image, cfg, frame_id=path.name, keep_stages=dump)
    if dump:
        dump_stages(report, path.stem, out_dir or path.parent)
    return report


# ---------------------------------------------------------------- commands


def cmd_detect(args) -> int:
    cfg = config_from_args(args)
    path = Path(args.image)
    keep = args.dump or args.figure is not None
    out_dir = Path(args.out_dir) if args.out_dir else path.parent
    t0 = time.perf_counter()
    image = load_image(path)
    report = detect_image(image, cfg, frame_id=args.frame_id or path.name, keep_stages=keep)
    log.info("detect %s: %.1f ms", path, (time.perf_counter() - t0) * 1e3)
    if args.dump:
        dump_stages(report, path.stem, out_dir)
    if args.figure is not None:
        from .plotting import plot_stages

        plot_stages(report, args.figure)
    _emit(report.to_dict())
    return EXIT_OK


def _gather_batch_paths(args) -> list[Path]:
    paths = [Path(p) for p in args.images]
    if args.manifest:
        paths.extend(path for _, path in manifest_entries(args.manifest))
    if not paths:
        raise CliError("batch needs image paths or --manifest")
    return paths


def cmd_batch(args) -> int:
    cfg = config_from_args(args)
    paths = _gather_batch_paths(args)
    out_dir = Path(args.out_dir) if args.out_dir else None

    def run(path):
        try:
            return _detect_path(path, cfg, args.dump, out_dir), None
        except ConfigError:
            raise
        except (OSError, PolypGateError) as exc:
            return None, f"{type(exc).__name__}: {exc}"

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(run, paths))
    else:
        results = [run(p) for p in paths]

    failed = 0
    for path, (report, error) in zip(paths, results):
        if report is None:
            failed += 1
            print(f"polypgate: {path}: {error}", file=sys.stderr)
            continue
        sys.stdout.write(report.to_json() + "\n")
    return EXIT_IO if failed else EXIT_OK


def cmd_eval(args) -> int:
    cfg = config_from_args(args)
    labels = load_labels(args.labels)
    result = evaluate(labels, cfg, jobs=args.jobs)
    for path, error in result.failures:
        print(f"polypgate: {path}: {error}", file=sys.stderr)
    if args.reports:
        with open(args.reports, "w", encoding="utf-8") as fh:
            for report, truth in zip(result.reports, result.labels):
                row = report.to_dict()
                row["label"] = truth.value
                fh.write(json.dumps(row) + "\n")
    if args.figure:
        from .plotting import plot_confusion

        plot_confusion(result.matrix, args.figure)
    summary = result.matrix.to_dict()
    summary["frames"] = result.matrix.total
    summary["failures"] = len(result.failures)
    sys.stdout.write(result.matrix.to_table() + "\n\n")
    _emit(summary)
    return EXIT_IO if result.failures else EXIT_OK


def _spec_from_args(args) -> PhantomSpec:
    data = {}
    if args.spec:
        with open(args.spec, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("phantom spec file must hold a JSON object")
    for name in ("width", "height", "background", "radius", "peak", "ring",
                 "ring_width", "noise", "seed", "tau2", "margin"):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    if args.center is not None:
        data["center"] = args.center
    return PhantomSpec.from_dict(data)


def cmd_phantom(args) -> int:
    if args.suite:
        seed = SUITE_SEED if args.seed is None else args.seed
        labels = write_suite(args.suite, phantom_suite(seed=seed))
        print(f"wrote suite to {labels.parent} (labels: {labels.name})", file=sys.stderr)
        return EXIT_OK
    if not args.output:
        raise CliError("phantom needs an output path or --suite DIR")
    spec = _spec_from_args(args)
    netpbm.write(args.output, generate_phantom(spec))
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = config_from_args(args)
    if args.manifest:
        frames = manifest_frames(args.manifest)
    elif args.frames:
        frames = directory_frames(args.frames)
    else:
        raise CliError("simulate needs a frame directory or --manifest")
    stats = run_stream(frames, cfg, bytes_per_frame=args.bytes_per_frame)
    text = stats.to_json(indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    if args.figure:
        from .plotting import plot_stream

        plot_stream(stats, cfg.area_threshold, args.figure)
    sys.stdout.write(text)
    return EXIT_IO if stats.frames_skipped else EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polypgate", description="Decide which capsule endoscopy frames are worth transmitting."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log timings to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="classify one image and print its JSON report")
    p.add_argument("image")
    p.add_argument("--dump", action="store_true", help="write intermediate masks as PGM")
    p.add_argument("--out-dir", help="directory for --dump output (default: beside the image)")
    p.add_argument("--figure", help="write a stage panel PNG to this path")
    p.add_argument("--frame-id", help="report label (default: file name)")
    _add_config_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("batch", help="classify many images, one JSON report per line")
    p.add_argument("images", nargs="*")
    p.add_argument("--manifest", help="file listing image paths, one per line")
    p.add_argument("--dump", action="store_true")
    p.add_argument("--out-dir")
    _add_jobs(p)
    _add_config_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("eval", help="confusion matrix over a labeled set")
    p.add_argument("--labels", required=True, help="CSV with header path,label")
    p.add_argument("--reports", help="write per-frame JSON lines here")
    p.add_argument("--figure", help="write a confusion-matrix PNG to this path")
    _add_jobs(p)
    _add_config_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("phantom", help="write a synthetic polyp phantom or the benchmark suite")
    p.add_argument("output", nargs="?")
    p.add_argument("--suite", metavar="DIR", help="write the pinned benchmark suite to DIR")
    p.add_argument("--spec", help="JSON file with PhantomSpec fields")
    for name in ("width", "height", "background", "radius", "peak", "ring",
                 "ring-width", "noise", "seed", "tau2", "margin"):
        p.add_argument(f"--{name}", type=int, dest=name.replace("-", "_"))
    p.add_argument("--center", type=int, nargs=2, metavar=("X", "Y"))
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("simulate", help="gate a frame sequence and report transmission savings")
    p.add_argument("frames", nargs="?", help="directory of numbered PPM/PGM frames")
    p.add_argument("--manifest", help="file listing frame paths in order")
    p.add_argument("--bytes-per-frame", type=int, default=320 * 320 * 3)
    p.add_argument("--out", help="also write the stats JSON here")
    p.add_argument("--figure", help="write a per-frame bar chart PNG to this path")
    _add_config_flags(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    if getattr(args, "jobs", 1) < 1:
        print("polypgate: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"polypgate: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CliError as exc:
        print(f"polypgate: {exc}", file=sys.stderr)
        return exc.status
    except (OSError, PolypGateError, ValueError) as exc:
        print(f"polypgate: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
