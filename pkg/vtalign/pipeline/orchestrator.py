"""
Registration Orchestrator - drives the metric and optimizer for one pair,
and fans a dataset directory of visual/thermal pairs out over workers
"""
import os
import json
import logging
import tempfile
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from vtalign.config import Config
from vtalign.core import mimetric
from vtalign.core import evo
from vtalign.core.filters import format_datetime, format_params
from vtalign.core.geometry import image_center, scale_translation, to_matrix
from vtalign.core.raster import histogram, load_image, save_image, write_histogram_csv
from vtalign.core.resample import prefilter, warp
from vtalign.exceptions import (
    CostEvaluationError, ImageIoError, ImageTooSmallError, InsufficientOverlapError,
    InvalidParamsError, InvalidStartError, NoPairsFoundError, VtalignError
)
from vtalign.models.imaging import Raster
from vtalign.models.registration import (
    LevelTrace, PairManifest, RegistrationConfig, RegistrationResult, StopReason
)
from vtalign.models.transforms import TransformKind, TransformParams
from vtalign.pipeline.pyramid import build_pyramid

logger = logging.getLogger(__name__)

MIN_REGISTRATION_SIZE = 32
# Smaller side of the coarsest pyramid level
MIN_LEVEL_SIZE = 16
SUMMARY_FILE = 'batch_summary.json'
RESULTS_FILE = 'batch_results.csv'


def default_scales(kind: TransformKind, width: int, height: int) -> Tuple[float, ...]:
    """
    Mutation multipliers so one radius unit moves every parameter by a
    comparable image-space amount (translations scale with the image extent)
    """
    extent = float(max(width, height))
    if kind is TransformKind.SIMILARITY:
        return (1.0, 1.0, extent, extent)
    return (1.0, 1.0, 1.0, 1.0, 1.0, extent, extent)


def align_moving(fixed: Raster, moving: Raster, result: RegistrationResult) -> Tuple[Raster, np.ndarray]:
    """Moving image resampled onto the fixed grid through the recovered transform"""
    return warp(moving, result.matrix, fixed.width, fixed.height)


def write_json_atomic(data: Dict, path: Path) -> None:
    """Write JSON through a temporary file so readers never see a partial manifest"""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', encoding='utf-8') as handle:
            json.dump(data, handle, indent=2)
            handle.write('\n')
        os.replace(tmp_name, path)
    except OSError:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


class RegistrationOrchestrator:
    """
    Central coordinator for visual/thermal registration.
    Runs the coarse-to-fine optimization for a pair and the dataset batch runner.
    """

    def __init__(self, settings=Config):
        self.orchestrator_id = "registration-orchestrator-001"
        self.settings = settings

        # Statistics
        self.stats = {
            'pairs_registered': 0,
            'pairs_failed': 0,
            'degenerate_pairs': 0,
            'total_iterations': 0
        }
        self._stats_lock = threading.Lock()

    def _count(self, key: str, amount: int = 1) -> None:
        with self._stats_lock:
            self.stats[key] += amount

    # ------------------------------------------------------------------
    # Single pair
    # ------------------------------------------------------------------

    def register(self, fixed: Raster, moving: Raster,
                 cfg: Optional[RegistrationConfig] = None) -> RegistrationResult:
        """
        Recover the transform mapping visual (fixed) pixels onto the thermal (moving) frame.

        Workflow:
        1. Validate sizes and flag constant inputs
        2. Evaluate the starting transform at full resolution
        3. Optimize from the coarsest pyramid level down to full resolution
        4. Package the result
        """
        cfg = cfg or RegistrationConfig()
        start = cfg.start
        center = image_center(fixed)

        # Step 1: Validate inputs
        for name, image in (('fixed', fixed), ('moving', moving)):
            if image.width < MIN_REGISTRATION_SIZE or image.height < MIN_REGISTRATION_SIZE:
                raise ImageTooSmallError(
                    f"{name} image is {image.width}x{image.height}; registration needs "
                    f"at least {MIN_REGISTRATION_SIZE}x{MIN_REGISTRATION_SIZE}"
                )
        levels = cfg.pyramid_levels
        coarsest = min(fixed.width, fixed.height, moving.width, moving.height) >> levels
        if coarsest < MIN_LEVEL_SIZE:
            raise ImageTooSmallError(
                f"{levels} pyramid level(s) shrink the smaller side to {coarsest} px; "
                f"the coarsest level needs at least {MIN_LEVEL_SIZE} px"
            )

        if fixed.is_constant() or moving.is_constant():
            logger.warning("[Orchestrator] Constant input image; returning the starting transform")
            self._count('degenerate_pairs')
            return RegistrationResult(
                params=start,
                matrix=to_matrix(start, center),
                center=center,
                final_cost=0.0,
                initial_cost=0.0,
                stop_reason=StopReason.DEGENERATE_INPUT,
                iterations=0,
                degenerate=True
            )

        # Step 2: Cost at the starting transform
        logger.info(f"[Orchestrator] Step 1/3: Evaluating start {format_params(start)}")
        stats_v = mimetric.intensity_stats_for(fixed, cfg.metric)
        stats_t = mimetric.intensity_stats_for(moving, cfg.metric)
        try:
            initial_cost = mimetric.evaluate(fixed, prefilter(moving), start, cfg.metric,
                                             stats_v, stats_t, center)
        except InsufficientOverlapError as e:
            raise InvalidStartError(
                f"the starting transform leaves too little overlap ({e}); "
                f"adjust the initial parameters"
            ) from e

        # Step 3: Coarse-to-fine optimization
        logger.info(f"[Orchestrator] Step 2/3: Optimizing over {levels + 1} level(s)")
        fixed_pyramid = build_pyramid(fixed, levels)
        moving_pyramid = build_pyramid(moving, levels)

        params = scale_translation(start, 0.5 ** levels)
        level_traces: List[LevelTrace] = []
        level_cost = initial_cost
        for level in range(levels, -1, -1):
            params, level_cost, level_trace = self._optimize_level(
                fixed_pyramid[level], moving_pyramid[level], params, cfg, level
            )
            level_traces.append(level_trace)
            if level > 0:
                params = scale_translation(params, 2.0)

        final_params, final_cost = params, level_cost
        if final_cost > initial_cost:
            logger.info("[Orchestrator] Optimized cost is worse than the start; keeping the start")
            final_params, final_cost = start, initial_cost

        # Step 4: Package
        iterations = sum(t.iterations for t in level_traces)
        result = RegistrationResult(
            params=final_params,
            matrix=to_matrix(final_params, center),
            center=center,
            final_cost=final_cost,
            initial_cost=initial_cost,
            stop_reason=level_traces[-1].stop_reason,
            iterations=iterations,
            per_level_traces=tuple(level_traces)
        )

        self._count('pairs_registered')
        self._count('total_iterations', iterations)
        logger.info(
            f"[Orchestrator] Step 3/3: {format_params(final_params)} "
            f"cost {initial_cost:.5f} -> {final_cost:.5f} in {iterations} iterations"
        )
        return result

    def _optimize_level(self, fixed: Raster, moving: Raster, params: TransformParams,
                        cfg: RegistrationConfig, level: int):
        """Run the (1+1) strategy on one pyramid level"""
        kind = cfg.kind
        center = image_center(fixed)
        stats_v = mimetric.intensity_stats_for(fixed, cfg.metric)
        stats_t = mimetric.intensity_stats_for(moving, cfg.metric)
        coeffs = prefilter(moving)

        def cost(vector):
            try:
                candidate = TransformParams.from_array(kind, vector)
            except InvalidParamsError as e:
                raise CostEvaluationError(str(e)) from e
            return mimetric.evaluate(fixed, coeffs, candidate, cfg.metric, stats_v, stats_t, center)

        evo_cfg = cfg.evo
        if evo_cfg.scales is None:
            evo_cfg = replace(evo_cfg, scales=default_scales(kind, fixed.width, fixed.height))
        evo_cfg = replace(evo_cfg, seed=(evo_cfg.seed + level) % 2 ** 64)

        logger.debug(f"[Orchestrator] Level {level}: {fixed.width}x{fixed.height}")
        try:
            outcome = evo.run(params.as_array(), cost, evo_cfg)
        except InvalidStartError as e:
            raise InvalidStartError(
                f"level {level}: {e}; adjust the initial parameters"
            ) from e

        level_trace = LevelTrace(
            level=level,
            width=fixed.width,
            height=fixed.height,
            iterations=outcome.iterations,
            stop_reason=outcome.reason,
            trace=outcome.trace
        )
        return TransformParams.from_array(kind, outcome.best), outcome.best_cost, level_trace

    # ------------------------------------------------------------------
    # Dataset batch
    # ------------------------------------------------------------------

    def discover_pairs(self, root: Path, visual_subdir: str, thermal_subdir: str):
        """Pair visual/thermal frames by shared stem; returns (pairs, unpaired)"""
        extensions = {ext.lower() for ext in self.settings.IMAGE_EXTENSIONS}

        def frames(subdir):
            folder = root / subdir
            if not folder.is_dir():
                return {}
            return {
                p.stem: p for p in sorted(folder.iterdir())
                if p.is_file() and p.suffix.lower() in extensions
            }

        visual = frames(visual_subdir)
        thermal = frames(thermal_subdir)
        pairs = [(stem, visual[stem], thermal[stem]) for stem in sorted(visual.keys() & thermal.keys())]
        unpaired = sorted(
            [str(p.relative_to(root)) for stem, p in visual.items() if stem not in thermal]
            + [str(p.relative_to(root)) for stem, p in thermal.items() if stem not in visual]
        )
        return pairs, unpaired

    def batch(self, root, out_dir, cfg: Optional[RegistrationConfig] = None,
              jobs: Optional[int] = None, visual_subdir: Optional[str] = None,
              thermal_subdir: Optional[str] = None, timestamps: bool = True,
              histograms: bool = False) -> List[PairManifest]:
        """
        Register every visual/thermal pair under root.

        Writes <stem>.json and <stem>_thermal_aligned.png per pair into out_dir,
        then batch_summary.json and batch_results.csv. A failing pair is
        recorded in its manifest and does not stop the batch.
        """
        root = Path(root)
        out_dir = Path(out_dir)
        cfg = cfg or RegistrationConfig()
        jobs = max(1, jobs or self.settings.JOBS)
        visual_subdir = visual_subdir or self.settings.VISUAL_SUBDIR
        thermal_subdir = thermal_subdir or self.settings.THERMAL_SUBDIR

        if not root.is_dir():
            raise ImageIoError(root, 'dataset root is not a directory')

        pairs, unpaired = self.discover_pairs(root, visual_subdir, thermal_subdir)
        if not pairs:
            raise NoPairsFoundError(
                f"no frames share a stem between {root / visual_subdir} and {root / thermal_subdir}"
            )
        for name in unpaired:
            logger.warning(f"[Orchestrator] Skipping unpaired frame {name}")

        logger.info(f"[Orchestrator] Registering {len(pairs)} pair(s) with {jobs} worker(s)")
        out_dir.mkdir(parents=True, exist_ok=True)

        def process(pair):
            stem, visual_path, thermal_path = pair
            return self._process_pair(stem, visual_path, thermal_path, out_dir, cfg,
                                      timestamps, histograms)

        if jobs == 1:
            manifests = [process(pair) for pair in pairs]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                manifests = list(pool.map(process, pairs))

        self._write_summary(out_dir, manifests, unpaired, cfg, timestamps)
        failed = sum(1 for m in manifests if not m.success)
        logger.info(f"[Orchestrator] Batch complete: {len(manifests) - failed} ok, {failed} failed")
        return manifests

    def _process_pair(self, stem: str, visual_path: Path, thermal_path: Path, out_dir: Path,
                      cfg: RegistrationConfig, timestamps: bool, histograms: bool) -> PairManifest:
        """Register one pair and write its artifacts; errors are recorded, not raised"""
        manifest = PairManifest(
            visual_path=str(visual_path),
            thermal_path=str(thermal_path),
            version=self.settings.APP_VERSION
        )
        try:
            fixed = load_image(visual_path)
            moving = load_image(thermal_path)
            result = self.register(fixed, moving, cfg)

            aligned, _ = align_moving(fixed, moving, result)
            aligned_path = out_dir / f'{stem}_thermal_aligned.png'
            save_image(aligned, aligned_path)

            if histograms:
                bins = self.settings.HISTOGRAM_BINS
                write_histogram_csv(histogram(fixed, bins), out_dir / f'{stem}_visual_hist.csv')
                write_histogram_csv(histogram(moving, bins), out_dir / f'{stem}_thermal_hist.csv')

            manifest.result = result
            manifest.aligned_path = str(aligned_path)
        except (VtalignError, OSError) as e:
            logger.error(f"[Orchestrator] Pair {stem} failed: {e}")
            self._count('pairs_failed')
            manifest.error = f"{type(e).__name__}: {e}"

        if timestamps:
            manifest.timestamp = format_datetime(format=self.settings.TIMESTAMP_FORMAT)
        write_json_atomic(manifest.to_dict(), out_dir / f'{stem}.json')
        return manifest

    def _write_summary(self, out_dir: Path, manifests: List[PairManifest], unpaired: List[str],
                       cfg: RegistrationConfig, timestamps: bool) -> None:
        """Batch-level JSON summary and one-row-per-pair CSV"""
        summary = {
            'pairs': len(manifests),
            'succeeded': sorted(m.stem for m in manifests if m.success),
            'failed': sorted(m.stem for m in manifests if not m.success),
            'unpaired': unpaired,
            'config': cfg.to_dict(),
            'version': self.settings.APP_VERSION,
        }
        if timestamps:
            summary['timestamp'] = format_datetime(format=self.settings.TIMESTAMP_FORMAT)
        write_json_atomic(summary, out_dir / SUMMARY_FILE)

        rows = []
        for m in manifests:
            row = {'stem': m.stem, 'success': m.success, 'error': m.error or ''}
            if m.result is not None:
                row.update({
                    'kind': m.result.params.kind.value,
                    'params': ' '.join(repr(v) for v in m.result.params.values),
                    'cost': m.result.final_cost,
                    'iterations': m.result.iterations,
                    'stop': m.result.stop_reason.value,
                    'degenerate': m.result.degenerate,
                })
            rows.append(row)
        pd.DataFrame(rows).to_csv(out_dir / RESULTS_FILE, index=False)


# Global orchestrator instance
orchestrator = RegistrationOrchestrator()


def register(fixed: Raster, moving: Raster, cfg: Optional[RegistrationConfig] = None) -> RegistrationResult:
    """Register one visual/thermal pair with the shared orchestrator"""
    return orchestrator.register(fixed, moving, cfg)


def batch(root, out_dir, cfg: Optional[RegistrationConfig] = None, **kwargs) -> List[PairManifest]:
    """Register every pair under a dataset root with the shared orchestrator"""
    return orchestrator.batch(root, out_dir, cfg, **kwargs)
