"""
Morph engine - repeated application of T = O_C^k_out o I_C^k_in.

MorphEngine keeps a log of every elementary pass ("I" / "O", or "T" for a
frozen-field pass) and counts completed T applications, so callers can audit
exactly what was run.
"""

import sys
from typing import Callable, List, Optional

from loguru import logger
from tqdm import tqdm

from src.core.errors import MeshError, MorphFailure, ObserverError, SpecError
from src.core.mesh import EdgeAdjacency, TriMesh, validate_closed_mesh
from src.core.settings import Settings, resolve
from src.core.types import MorphParams, RefreshMode, Schedule
from src.morph.transform import step_frozen, step_inward, step_outward

# observer(iteration, mesh)
Observer = Callable[[int, TriMesh], None]

PRESET_INNER = 100  # T applications per half of one preset round


class MorphEngine:
    """
    Runs T, Morph-Step, the alternating preset and arbitrary schedules.

    Attributes:
        step_log: elementary passes in execution order (empty when keep_log is False)
        iterations: completed T applications
    """

    def __init__(
        self,
        settings: Optional[Settings] = None,
        refresh: Optional[RefreshMode] = None,
        keep_log: bool = True,
    ):
        self.settings = resolve(settings)
        self.refresh = refresh or self.settings.refresh
        self.keep_log = keep_log
        self.step_log: List[str] = []
        self.iterations = 0

    def reset(self) -> None:
        self.step_log = []
        self.iterations = 0

    def _record(self, token: str) -> None:
        if self.keep_log:
            self.step_log.append(token)

    def _adjacency(self, mesh: TriMesh, adj: Optional[EdgeAdjacency]) -> EdgeAdjacency:
        return adj if adj is not None else validate_closed_mesh(mesh, self.settings)

    def apply_T(self, mesh: TriMesh, params: MorphParams, adj: Optional[EdgeAdjacency] = None) -> TriMesh:
        """
        k_in inward passes followed by k_out outward passes.

        In PER_STEP mode the field is re-evaluated before each pass; in
        FROZEN_PER_T mode once, with all passes folded into one move.
        """
        adj = self._adjacency(mesh, adj)

        if self.refresh == RefreshMode.FROZEN_PER_T:
            mesh = step_frozen(mesh, adj, params.k_in, params.k_out, params.c, self.settings)
            self._record("T")
        else:
            for _ in range(params.k_in):
                mesh = step_inward(mesh, adj, params.c, self.settings)
                self._record("I")
            for _ in range(params.k_out):
                mesh = step_outward(mesh, adj, params.c, self.settings)
                self._record("O")

        self.iterations += 1
        return mesh

    def morph_step(
        self, mesh: TriMesh, n: int, params: MorphParams, adj: Optional[EdgeAdjacency] = None
    ) -> TriMesh:
        """Apply T exactly n times; n=0 returns the input"""
        if n < 0:
            raise SpecError(f"Repetition count must be non-negative, got {n}")
        if n == 0:
            return mesh
        adj = self._adjacency(mesh, adj)
        for _ in range(n):
            mesh = self.apply_T(mesh, params, adj)
        return mesh

    def morph_preset(
        self, mesh: TriMesh, m: int, c: float = 0.25, adj: Optional[EdgeAdjacency] = None
    ) -> TriMesh:
        """m rounds of 100 x T(2,2,C) then 100 x T(2,1,C): 200*m iterations"""
        if m < 0:
            raise SpecError(f"Round count must be non-negative, got {m}")
        if m == 0:
            return mesh
        adj = self._adjacency(mesh, adj)
        grow = MorphParams(k_in=2, k_out=2, c=c)
        shrink = MorphParams(k_in=2, k_out=1, c=c)
        for _ in range(m):
            mesh = self.morph_step(mesh, PRESET_INNER, grow, adj)
            mesh = self.morph_step(mesh, PRESET_INNER, shrink, adj)
        return mesh

    def run_schedule(
        self,
        mesh: TriMesh,
        schedule: Schedule,
        observer: Optional[Observer] = None,
        progress: bool = False,
    ) -> TriMesh:
        """
        Execute the phases in order, calling observer at iteration 0, every
        stride multiple and every phase boundary (each index at most once).

        Raises:
            ObserverError: the observer raised
            MorphFailure: a step failed numerically (carries the iteration)
        """
        adj = validate_closed_mesh(mesh, self.settings)
        marks = set(schedule.checkpoints())
        iteration = 0
        self._notify(observer, iteration, mesh)

        with tqdm(
            total=schedule.total_iterations,
            disable=not progress,
            file=sys.stderr,
            unit="it",
            desc="morph",
        ) as bar:
            for index, phase in enumerate(schedule.phases, start=1):
                p = phase.params
                logger.info(
                    f"Phase {index}/{len(schedule.phases)}: {phase.n} x T(k_in={p.k_in}, "
                    f"k_out={p.k_out}, C={p.c:.6g}) from iteration {iteration}"
                )
                for _ in range(phase.n):
                    try:
                        mesh = self.apply_T(mesh, p, adj)
                    except MeshError as e:
                        raise MorphFailure(
                            f"Morph step failed at iteration {iteration + 1}: {e}", iteration + 1, e
                        ) from e
                    iteration += 1
                    bar.update(1)
                    if iteration in marks:
                        self._notify(observer, iteration, mesh)
        return mesh

    @staticmethod
    def _notify(observer: Optional[Observer], iteration: int, mesh: TriMesh) -> None:
        if observer is None:
            return
        try:
            observer(iteration, mesh)
        except Exception as e:
            raise ObserverError(f"Observer failed at iteration {iteration}: {e}", iteration) from e

    def __repr__(self) -> str:
        return f"MorphEngine(refresh={self.refresh.value}, iterations={self.iterations})"


# ============================================================================
# FUNCTIONAL FRONT END
# ============================================================================

def apply_T(
    mesh: TriMesh,
    params: MorphParams,
    adj: Optional[EdgeAdjacency] = None,
    settings: Optional[Settings] = None,
    refresh: Optional[RefreshMode] = None,
) -> TriMesh:
    return MorphEngine(settings, refresh).apply_T(mesh, params, adj)


def morph_step(
    mesh: TriMesh,
    n: int,
    params: MorphParams,
    settings: Optional[Settings] = None,
    refresh: Optional[RefreshMode] = None,
) -> TriMesh:
    return MorphEngine(settings, refresh).morph_step(mesh, n, params)


def morph_preset(
    mesh: TriMesh,
    m: int,
    c: float = 0.25,
    settings: Optional[Settings] = None,
    refresh: Optional[RefreshMode] = None,
) -> TriMesh:
    return MorphEngine(settings, refresh).morph_preset(mesh, m, c)


def run_schedule(
    mesh: TriMesh,
    schedule: Schedule,
    observer: Optional[Observer] = None,
    settings: Optional[Settings] = None,
    refresh: Optional[RefreshMode] = None,
) -> TriMesh:
    return MorphEngine(settings, refresh).run_schedule(mesh, schedule, observer)
