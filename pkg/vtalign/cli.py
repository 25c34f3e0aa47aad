"""
Command-line interface
Subcommands: register, batch, overlay, histogram, patches, synth
"""
import sys
import json
import math
import logging
import argparse
from pathlib import Path

from vtalign import create_toolkit, setup_logging
from vtalign.core.filters import format_datetime, format_number, format_params
from vtalign.core.raster import (
    histogram, load_image, save_color_image, save_image, write_histogram_csv
)
from vtalign.exceptions import (
    ImageFormatError, ImageIoError, InvalidParamsError, ManifestError, NotEnoughCornersError,
    RegistrationError, VtalignError
)
from vtalign.inspection import (
    extract_patch_pairs, fast_detect, overlay_checkerboard, overlay_difference,
    overlay_redcyan, save_patch_pairs
)
from vtalign.models.registration import (
    EvoConfig, MetricConfig, PairManifest, RegistrationConfig
)
from vtalign.models.transforms import TransformKind, TransformMatrix, TransformParams
from vtalign.pipeline import align_moving
from vtalign.pipeline.orchestrator import RegistrationOrchestrator, write_json_atomic
from vtalign.simulation import structured_scene, synth_pair

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_FAILURE = 3

SYNTH_SCENE_SIZE = 256


class UsageError(Exception):
    """Bad command line; argparse has already printed the usage text"""


class ToolkitArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting with status 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _add_tuning_flags(parser):
    """Metric and optimizer flags shared by register and batch; unset flags fall back to config"""
    group = parser.add_argument_group('registration tuning')
    group.add_argument('--kind', choices=[k.value for k in TransformKind], default=None,
                       help='transform family')
    group.add_argument('--bins', type=int, default=None, help='joint histogram bins per axis')
    group.add_argument('--sampling', type=float, default=None,
                       help='fraction of fixed pixels sampled by the metric')
    group.add_argument('--pyramid', type=int, default=None, help='extra pyramid levels (0-4)')
    group.add_argument('--seed', type=int, default=None, help='random seed')
    group.add_argument('--growth', type=float, default=None, help='radius growth on success')
    group.add_argument('--shrink', type=float, default=None, help='radius shrink on failure')
    group.add_argument('--radius', type=float, default=None, help='initial search radius')
    group.add_argument('--epsilon', type=float, default=None, help='radius stopping threshold')
    group.add_argument('--max-iters', type=int, default=None, help='iteration cap per level')
    group.add_argument('--no-timestamp', action='store_true',
                       help='omit timestamps so reruns are byte-identical')


def build_parser():
    parser = ToolkitArgumentParser(
        prog='vtalign',
        description='Calibration-free visual/thermal frame alignment'
    )
    parser.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    p = commands.add_parser('register', help='register one visual/thermal pair')
    p.add_argument('--visual', required=True, help='visual (fixed) frame')
    p.add_argument('--thermal', required=True, help='thermal (moving) frame')
    p.add_argument('--out', required=True, help='manifest JSON path')
    p.add_argument('--aligned', default=None, help='write the aligned thermal frame here')
    p.add_argument('--trace', default=None, help='write the optimizer trace CSV here')
    _add_tuning_flags(p)
    p.set_defaults(handler=cmd_register)

    p = commands.add_parser('batch', help='register every pair under a dataset root')
    p.add_argument('--root', required=True, help='directory holding visual/ and thermal/')
    p.add_argument('--out-dir', required=True, help='output directory')
    p.add_argument('--jobs', type=int, default=None, help='worker threads (default: cores)')
    p.add_argument('--visual-subdir', default=None)
    p.add_argument('--thermal-subdir', default=None)
    p.add_argument('--histograms', action='store_true',
                   help='also write per-pair intensity histograms')
    _add_tuning_flags(p)
    p.set_defaults(handler=cmd_batch)

    p = commands.add_parser('overlay', help='compose a visual frame with an aligned thermal frame')
    p.add_argument('--mode', required=True, choices=['redcyan', 'difference', 'checkerboard'])
    p.add_argument('--visual', required=True)
    p.add_argument('--aligned', required=True)
    p.add_argument('--out', required=True)
    p.add_argument('--tile', type=int, default=None, help='checkerboard tile size in px')
    p.set_defaults(handler=cmd_overlay)

    p = commands.add_parser('histogram', help='intensity histogram as bin,count CSV')
    p.add_argument('--image', required=True)
    p.add_argument('--bins', type=int, default=None)
    p.add_argument('--out', required=True)
    p.set_defaults(handler=cmd_histogram)

    p = commands.add_parser('patches', help='cross-modal patch pairs around visual corners')
    p.add_argument('--visual', required=True)
    p.add_argument('--thermal', required=True)
    p.add_argument('--manifest', required=True, help='manifest written by register')
    p.add_argument('--count', type=int, default=None)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--threshold', type=float, default=None, help='FAST intensity threshold')
    p.add_argument('--out-dir', required=True)
    p.set_defaults(handler=cmd_patches)

    p = commands.add_parser('synth', help='synthetic visual/pseudo-thermal pair with known truth')
    p.add_argument('--source', default=None, help='source frame (default: generated scene)')
    p.add_argument('--tx', type=float, default=0.0)
    p.add_argument('--ty', type=float, default=0.0)
    p.add_argument('--rot-deg', type=float, default=0.0)
    p.add_argument('--scale', type=float, default=1.0)
    p.add_argument('--gamma', type=float, default=1.0)
    p.add_argument('--noise', type=float, default=0.0)
    p.add_argument('--blur', type=float, default=0.0)
    p.add_argument('--seed', type=int, default=None)
    p.add_argument('--stem', default='synth', help='file stem of the written pair')
    p.add_argument('--out-dir', required=True)
    p.set_defaults(handler=cmd_synth)

    return parser


def _pick(value, default):
    return default if value is None else value


def registration_config(args, settings) -> RegistrationConfig:
    """RegistrationConfig from tuning flags over configuration defaults"""
    seed = _pick(args.seed, settings.SEED)
    try:
        return RegistrationConfig(
            kind=TransformKind(_pick(args.kind, settings.TRANSFORM_KIND)),
            metric=MetricConfig(
                bin_count=_pick(args.bins, settings.METRIC_BIN_COUNT),
                sampling_fraction=_pick(args.sampling, settings.METRIC_SAMPLING_FRACTION),
                sample_seed=seed,
                min_valid_fraction=settings.METRIC_MIN_VALID_FRACTION
            ),
            evo=EvoConfig(
                growth_factor=_pick(args.growth, settings.EVO_GROWTH_FACTOR),
                shrink_factor=_pick(args.shrink, settings.EVO_SHRINK_FACTOR),
                initial_radius=_pick(args.radius, settings.EVO_INITIAL_RADIUS),
                epsilon=_pick(args.epsilon, settings.EVO_EPSILON),
                max_iterations=_pick(args.max_iters, settings.EVO_MAX_ITERATIONS),
                seed=seed
            ),
            pyramid_levels=_pick(args.pyramid, settings.PYRAMID_LEVELS)
        )
    except ValueError as e:
        raise UsageError(str(e)) from e


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_register(args, settings) -> int:
    cfg = registration_config(args, settings)
    fixed = load_image(args.visual)
    moving = load_image(args.thermal)

    result = RegistrationOrchestrator(settings).register(fixed, moving, cfg)

    manifest = PairManifest(
        visual_path=str(args.visual),
        thermal_path=str(args.thermal),
        version=settings.APP_VERSION,
        result=result
    )
    if args.aligned:
        aligned, _ = align_moving(fixed, moving, result)
        save_image(aligned, args.aligned)
        manifest.aligned_path = str(args.aligned)
    if args.trace:
        Path(args.trace).parent.mkdir(parents=True, exist_ok=True)
        result.trace_frame().to_csv(args.trace, index=False)
    if not args.no_timestamp:
        manifest.timestamp = format_datetime(format=settings.TIMESTAMP_FORMAT)
    write_json_atomic(manifest.to_dict(), Path(args.out))

    print(f"{format_params(result.params)} cost {format_number(result.final_cost, 6)} "
          f"({result.iterations} iterations, {result.stop_reason.value})")
    return EXIT_OK


def cmd_batch(args, settings) -> int:
    cfg = registration_config(args, settings)
    if args.jobs is not None and args.jobs < 1:
        raise UsageError(f"--jobs must be at least 1, got {args.jobs}")

    manifests = RegistrationOrchestrator(settings).batch(
        args.root, args.out_dir, cfg,
        jobs=args.jobs,
        visual_subdir=args.visual_subdir,
        thermal_subdir=args.thermal_subdir,
        timestamps=not args.no_timestamp,
        histograms=args.histograms
    )
    failed = [m.stem for m in manifests if not m.success]
    print(f"{len(manifests) - len(failed)}/{len(manifests)} pairs registered")
    for stem in failed:
        print(f"failed: {stem}", file=sys.stderr)
    return EXIT_FAILURE if failed else EXIT_OK


def cmd_overlay(args, settings) -> int:
    tile = _pick(args.tile, settings.CHECKERBOARD_TILE)
    if tile < 4:
        raise UsageError(f"--tile must be at least 4, got {tile}")
    fixed = load_image(args.visual)
    aligned = load_image(args.aligned)

    if args.mode == 'redcyan':
        save_color_image(overlay_redcyan(fixed, aligned), args.out)
    elif args.mode == 'difference':
        save_image(overlay_difference(fixed, aligned), args.out)
    else:
        save_image(overlay_checkerboard(fixed, aligned, tile), args.out)
    return EXIT_OK


def cmd_histogram(args, settings) -> int:
    bins = _pick(args.bins, settings.HISTOGRAM_BINS)
    if bins < 2:
        raise UsageError(f"--bins must be at least 2, got {bins}")
    write_histogram_csv(histogram(load_image(args.image), bins), args.out)
    return EXIT_OK


def read_manifest_matrix(path) -> TransformMatrix:
    """Transform matrix recorded by register or batch"""
    path = Path(path)
    try:
        with open(path, encoding='utf-8') as handle:
            data = json.load(handle)
    except OSError as e:
        raise ManifestError(path, f'cannot read ({e})') from e
    except ValueError as e:
        raise ManifestError(path, f'not valid JSON ({e})') from e

    transform = data.get('transform') if isinstance(data, dict) else None
    if not transform:
        raise ManifestError(path, 'manifest records no transform')
    try:
        return TransformMatrix.from_list(transform['matrix'])
    except (KeyError, TypeError, ValueError, InvalidParamsError) as e:
        raise ManifestError(path, f'malformed transform ({e})') from e


def cmd_patches(args, settings) -> int:
    count = _pick(args.count, settings.PATCH_COUNT)
    threshold = _pick(args.threshold, settings.FAST_THRESHOLD)
    if count < 1:
        raise UsageError(f"--count must be at least 1, got {count}")
    if threshold <= 0:
        raise UsageError(f"--threshold must be positive, got {threshold}")

    m = read_manifest_matrix(args.manifest)
    visual = load_image(args.visual)
    thermal = load_image(args.thermal)

    corners = fast_detect(visual, threshold, settings.FAST_CONTIGUOUS)
    pairs = extract_patch_pairs(visual, thermal, m, corners, count,
                                _pick(args.seed, settings.SEED), settings.PATCH_SIZE)
    save_patch_pairs(pairs, args.out_dir, Path(args.visual).stem)
    print(f"{len(pairs)} patch pairs from {len(corners)} corners")
    return EXIT_OK


def cmd_synth(args, settings) -> int:
    seed = _pick(args.seed, settings.SEED)
    if args.source:
        source = load_image(args.source)
    else:
        source = structured_scene(SYNTH_SCENE_SIZE, SYNTH_SCENE_SIZE, seed)

    try:
        truth = TransformParams.similarity(
            q=math.radians(args.rot_deg), s=args.scale, tx=args.tx, ty=args.ty
        )
    except VtalignError as e:
        raise UsageError(str(e)) from e
    if args.gamma <= 0 or args.noise < 0 or args.blur < 0:
        raise UsageError('--gamma must be positive and --noise/--blur non-negative')

    pair = synth_pair(source, truth, args.gamma, args.noise, args.blur, seed)

    out_dir = Path(args.out_dir)
    save_image(pair.visual, out_dir / settings.VISUAL_SUBDIR / f'{args.stem}.png')
    save_image(pair.thermal, out_dir / settings.THERMAL_SUBDIR / f'{args.stem}.png')
    write_json_atomic({
        'truth': truth.to_dict(),
        'gamma': args.gamma,
        'noise': args.noise,
        'blur': args.blur,
        'seed': seed,
    }, out_dir / f'{args.stem}_truth.json')
    print(f"{args.stem}: {format_params(truth)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    """
    Run one subcommand

    Returns:
        0 success, 1 usage error, 2 I/O error, 3 registration or processing failure
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return int(e.code or 0)

    settings = create_toolkit()
    if args.verbose:
        setup_logging(settings, logging.DEBUG)
    logger.debug(f"vtalign {args.command} ({settings.APP_NAME} v{settings.APP_VERSION})")

    try:
        return args.handler(args, settings)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ImageIoError, ImageFormatError, ManifestError, OSError) as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except (RegistrationError, NotEnoughCornersError) as e:
        print(f"registration failed: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except VtalignError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
