"""
Main Entry Point - curvature morphing runs from the command line
Loads or generates a mesh, runs a morph schedule, writes snapshots and metrics
"""

import sys
import os
import argparse
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pandas as pd
from loguru import logger
from rich.console import Console
from rich.table import Table

from src.core.errors import MeshError, MorphFailure, ObserverError, SpecError
from src.core.mesh import EdgeAdjacency, TriMesh, validate_closed_mesh
from src.core.settings import Settings, get_settings
from src.core.types import (
    METRICS_COLUMNS, GeneratorSpec, MetricsRecord, RefreshMode, RunConfig,
    RunResult, Shape, VertexAveraging,
)
from src.morph.engine import MorphEngine
from src.tools.curvature import compute_field
from src.tools.generators import generate
from src.tools.metrics import compute_metrics
from src.tools.obj_io import load_obj, save_obj
from src.verifiers.manifold_verifier import ManifoldVerifier

EXIT_OK = 0
EXIT_RUN_FAILED = 1
EXIT_INVALID = 2

FLOAT_FORMAT = "%.17g"


class SnapshotRejected(RuntimeError):
    """A checkpoint snapshot failed manifold verification"""


def configure_logging(level: str = "INFO") -> None:
    """Single stderr sink; machine output goes to files only"""
    logger.remove()
    logger.add(
        sys.stderr,
        level=level.upper(),
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}",
    )


def write_csv(frame: pd.DataFrame, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="nan", lineterminator="\n")


def write_metrics(records: List[MetricsRecord], path: Path) -> None:
    """iter,area,volume,sphericity,radius_cv,k_min,k_max,k_mean,k_std"""
    frame = pd.DataFrame([r.csv_row() for r in records], columns=METRICS_COLUMNS)
    write_csv(frame, path)


def write_curvature(mesh: TriMesh, adj: EdgeAdjacency, path: Path, settings: Settings) -> None:
    """vertex,k for every vertex"""
    field = compute_field(mesh, adj, settings)
    frame = pd.DataFrame({
        "vertex": np.arange(mesh.n_vertices),
        "k": field.vertex_curvatures,
    })
    write_csv(frame, path)


class MorphRunner:
    """
    Orchestrates one run:
    input mesh -> schedule -> checkpoint snapshots + metrics -> final mesh.
    """

    def __init__(self, settings: Optional[Settings] = None, console: Optional[Console] = None):
        self.base_settings = settings or get_settings()
        self.console = console or Console(stderr=True)
        self.verifier: Optional[ManifoldVerifier] = None

    def _load_mesh(self, config: RunConfig, settings: Settings) -> TriMesh:
        if config.input_path is not None:
            if not config.input_path.exists():
                raise FileNotFoundError(f"Input file not found: {config.input_path}")
            logger.info(f"Loading {config.input_path}")
            return load_obj(config.input_path, settings)
        spec = config.generator
        logger.info(f"Generating {spec.shape.value} (sub={spec.sub}, seed={spec.seed})")
        return generate(spec)

    def run(self, config: RunConfig) -> RunResult:
        """
        Execute a run described by config

        Returns:
            RunResult; exit_code 0 on success, 1 on a mid-run failure
            (partial outputs kept), 2 on invalid input
        """
        settings = self.base_settings.model_copy(update={
            "vertex_averaging": config.vertex_averaging,
            "refresh": config.refresh,
        })

        try:
            mesh = self._load_mesh(config, settings)
            adj = validate_closed_mesh(mesh, settings)
            c = config.c if config.c is not None else config.c_rel * mesh.bbox_diagonal()
            schedule = config.build_schedule(c)
        except FileNotFoundError as e:
            logger.error(str(e))
            return RunResult(exit_code=EXIT_INVALID, message=str(e))
        except (MeshError, SpecError, ValueError) as e:
            logger.error(f"Invalid input: {e}")
            return RunResult(exit_code=EXIT_INVALID, message=str(e))

        logger.info(
            f"Mesh: {mesh.n_vertices} vertices, {mesh.n_faces} faces; C={c:.6g}; "
            f"{len(schedule.phases)} phases, {schedule.total_iterations} iterations, stride {schedule.stride}"
        )

        config.out_dir.mkdir(parents=True, exist_ok=True)
        result = RunResult(exit_code=EXIT_OK)
        self.verifier = ManifoldVerifier(settings) if config.verify else None

        def observer(iteration: int, snapshot: TriMesh) -> None:
            path = config.out_dir / f"snap_{iteration:06d}.obj"
            save_obj(snapshot, path)
            result.snapshots.append(path)
            if self.verifier is not None:
                check = self.verifier.verify_mesh(snapshot)
                if not check.passed:
                    raise SnapshotRejected(
                        f"{path.name}: " + "; ".join(e.message for e in check.errors)
                    )
            record = compute_metrics(snapshot, iteration, adj, settings)
            result.records.append(record)
            logger.debug(f"Checkpoint {iteration}: sphericity={record.sphericity:.6f}")

        engine = MorphEngine(settings, keep_log=False)
        final = None
        try:
            final = engine.run_schedule(mesh, schedule, observer, progress=config.progress)
        except MorphFailure as e:
            logger.error(f"Run failed at iteration {e.iteration}: {e.cause}")
            result.exit_code = EXIT_RUN_FAILED
            result.failed_iteration = e.iteration
            result.message = str(e)
        except ObserverError as e:
            logger.error(f"Checkpoint failed at iteration {e.iteration}: {e.__cause__}")
            result.exit_code = EXIT_RUN_FAILED
            result.failed_iteration = e.iteration
            result.message = str(e)
        finally:
            write_metrics(result.records, config.resolved_metrics_path)

        if final is not None:
            save_obj(final, config.out_dir / "final.obj")
            if config.dump_curvature is not None:
                write_curvature(final, adj, config.dump_curvature, settings)
            logger.info(f"Done: {engine.iterations} iterations, outputs in {config.out_dir}")

        self.print_summary(result)
        return result

    def print_summary(self, result: RunResult) -> None:
        """Checkpoint table on stderr"""
        if not result.records:
            return
        table = Table(title="Morph checkpoints")
        for column in ("iter", "sphericity", "radius_cv", "k_mean", "k_std", "volume"):
            table.add_column(column, justify="right")
        for r in result.records:
            table.add_row(
                str(r.iteration),
                f"{r.sphericity:.6f}",
                f"{r.radius_cv:.4f}",
                f"{r.k_mean:.5g}",
                f"{r.k_std:.5g}",
                f"{r.volume:.5g}",
            )
        self.console.print(table)


# ============================================================================
# ARGUMENT PARSING
# ============================================================================

def parse_phases(text: str) -> List[Tuple[int, int, int]]:
    """
    Parse "n:kin:kout,..." into phase triples

    Example:
        >>> parse_phases("100:2:2,100:2:1")
        [(100, 2, 2), (100, 2, 1)]
    """
    phases = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 3:
            raise SpecError(f"Phase {chunk!r} must look like n:kin:kout")
        try:
            n, k_in, k_out = (int(p) for p in parts)
        except ValueError as e:
            raise SpecError(f"Phase {chunk!r} must contain integers") from e
        phases.append((n, k_in, k_out))
    if not phases:
        raise SpecError("No phases given")
    return phases


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Morph closed triangle meshes toward round spheres by curvature-weighted vertex moves"
    )

    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", type=Path, help="Input OBJ file")
    source.add_argument("--gen", choices=[s.value for s in Shape], help="Generate a test shape")
    parser.add_argument("--sub", type=int, default=0, help="Subdivision level for --gen")
    parser.add_argument("--seed", type=int, default=0, help="Seed for --noise")
    parser.add_argument("--noise", type=float, default=0.0, help="Radial jitter, fraction of mean edge length")
    parser.add_argument("--aspect", type=float, default=2.0, help="Cylinder/dumbbell elongation")
    parser.add_argument("--dent-depth", type=float, default=0.3, help="Dented sphere dent depth")
    parser.add_argument("--dent-width", type=float, default=0.8, help="Dented sphere dent half-width (radians)")
    parser.add_argument("--neck-radius", type=float, default=0.35, help="Dumbbell neck radius")
    parser.add_argument("--bulb-radius", type=float, default=1.0, help="Dumbbell bulb radius")

    schedule = parser.add_mutually_exclusive_group()
    schedule.add_argument("--preset", choices=["paper"], help="Alternating (2,2)/(2,1) preset")
    schedule.add_argument("--phases", type=str, help='Explicit phases "n:kin:kout,..."')
    parser.add_argument("--m", type=int, default=1, help="Preset rounds (200 iterations each)")

    step = parser.add_mutually_exclusive_group()
    step.add_argument("--c", type=float, help="Step size C in mesh units")
    step.add_argument("--c-rel", type=float, help="Step size relative to the bounding-box diagonal")

    parser.add_argument("--stride", type=int, default=200, help="Checkpoint every N iterations")
    parser.add_argument("--out", type=Path, default=Path("out"), help="Output directory")
    parser.add_argument("--metrics", type=Path, help="Metrics CSV path (default OUT/metrics.csv)")
    parser.add_argument("--frozen-t", action="store_true", help="Evaluate the field once per T")
    parser.add_argument(
        "--vertex-averaging",
        choices=[v.value for v in VertexAveraging],
        help="How edge curvatures are averaged onto vertices",
    )
    parser.add_argument("--dump-curvature", type=Path, help="Write final per-vertex curvature CSV")
    parser.add_argument("--verify", action="store_true", help="Verify every snapshot is a closed manifold")
    parser.add_argument("--progress", action="store_true", help="Show a progress bar")
    parser.add_argument("--log-level", type=str, help="Log level (default from MORPH_LOG_LEVEL or INFO)")
    parser.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    return parser


def config_from_args(args: argparse.Namespace, settings: Settings) -> RunConfig:
    generator = None
    if args.gen:
        generator = GeneratorSpec(
            shape=Shape(args.gen),
            sub=args.sub,
            aspect=args.aspect,
            dent_depth=args.dent_depth,
            dent_width=args.dent_width,
            neck_radius=args.neck_radius,
            bulb_radius=args.bulb_radius,
            noise=args.noise,
            seed=args.seed,
        )

    c, c_rel = args.c, args.c_rel
    if c is None and c_rel is None:
        c_rel = settings.default_c_rel

    return RunConfig(
        input_path=args.input,
        generator=generator,
        preset=args.preset,
        m=args.m,
        phases=parse_phases(args.phases) if args.phases else [],
        c=c,
        c_rel=c_rel,
        stride=args.stride,
        out_dir=args.out,
        metrics_path=args.metrics,
        refresh=RefreshMode.FROZEN_PER_T if args.frozen_t else settings.refresh,
        vertex_averaging=(
            VertexAveraging(args.vertex_averaging) if args.vertex_averaging else settings.vertex_averaging
        ),
        dump_curvature=args.dump_curvature,
        verify=args.verify,
        progress=args.progress,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit status"""
    parser = build_parser()
    args = parser.parse_args(argv)

    settings = get_settings()
    level = "WARNING" if args.quiet else (args.log_level or settings.log_level)
    configure_logging(level)

    try:
        config = config_from_args(args, settings)
    except ValueError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_INVALID

    result = MorphRunner(settings).run(config)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
