"""
Type definitions for the curvature morphing toolkit.
Typed records for parameters, schedules, run configuration, metrics and
verification results. Array-backed mesh containers live in src.core.mesh.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


Point3 = Tuple[float, float, float]


class RefreshMode(str, Enum):
    """When the curvature field and vertex normals are re-evaluated"""
    PER_STEP = "per_step"          # before every elementary I or O pass
    FROZEN_PER_T = "frozen_per_t"  # once per T application


class VertexAveraging(str, Enum):
    """How edge curvatures are averaged onto a vertex"""
    UNIFORM = "uniform"
    LENGTH_WEIGHTED = "length_weighted"


class Shape(str, Enum):
    """Procedural test shapes"""
    CUBE = "cube"
    CYLINDER = "cylinder"
    ICOSPHERE = "icosphere"
    DENTED_SPHERE = "dented_sphere"
    DUMBBELL = "dumbbell"
    TETRAHEDRON = "tetrahedron"
    ICOSAHEDRON = "icosahedron"


# ============================================================================
# CURVATURE FIELD
# ============================================================================

class CurvatureField(BaseModel):
    """Per-edge and per-vertex discrete mean curvature of one mesh state"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    edge_lengths: np.ndarray      # l(e)
    dihedral_angles: np.ndarray   # theta(e), radians in (-pi, pi]
    edge_curvatures: np.ndarray   # K(e) = l(e) * theta(e)
    vertex_normals: np.ndarray    # n_p, unit length, shape (V, 3)
    vertex_curvatures: np.ndarray  # K(p)
    k_min: float
    k_max: float
    uniform: bool = False  # K_max - K_min under the uniform-field threshold


# ============================================================================
# MORPH PARAMETERS AND SCHEDULES
# ============================================================================

class MorphParams(BaseModel):
    """The triple (k_in, k_out, C) that defines one transformation T"""
    model_config = ConfigDict(frozen=True)

    k_in: int = Field(..., ge=0, description="Number of inward passes per T")
    k_out: int = Field(..., ge=0, description="Number of outward passes per T")
    c: float = Field(..., gt=0, description="Step magnitude C in mesh units")

    @model_validator(mode="after")
    def _at_least_one_pass(self) -> "MorphParams":
        if self.k_in + self.k_out < 1:
            raise ValueError("k_in + k_out must be at least 1")
        return self


class Phase(BaseModel):
    """n repetitions of T with fixed parameters"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0)
    params: MorphParams


class Schedule(BaseModel):
    """Ordered phases plus the checkpoint stride (in T applications)"""
    phases: List[Phase] = Field(default_factory=list)
    stride: int = Field(200, ge=1)

    @property
    def total_iterations(self) -> int:
        return sum(phase.n for phase in self.phases)

    @classmethod
    def preset(cls, m: int, c: float = 0.25, stride: int = 200) -> "Schedule":
        """The alternating preset: m rounds of 100 x (2,2,C) then 100 x (2,1,C)"""
        if m < 0:
            raise ValueError(f"m must be non-negative, got {m}")
        phases: List[Phase] = []
        for _ in range(m):
            phases.append(Phase(n=100, params=MorphParams(k_in=2, k_out=2, c=c)))
            phases.append(Phase(n=100, params=MorphParams(k_in=2, k_out=1, c=c)))
        return cls(phases=phases, stride=stride)

    def checkpoints(self) -> List[int]:
        """Iteration indices at which an observer fires (stride multiples plus phase boundaries)"""
        total = self.total_iterations
        marks = set(range(0, total + 1, self.stride))
        running = 0
        for phase in self.phases:
            running += phase.n
            marks.add(running)
        return sorted(marks)


# ============================================================================
# GENERATORS AND RUN CONFIGURATION
# ============================================================================

class GeneratorSpec(BaseModel):
    """Parameters of a procedural test mesh"""
    shape: Shape
    sub: int = Field(0, ge=0, le=7, description="Subdivision level")
    aspect: float = Field(2.0, gt=0, description="Cylinder height/diameter, dumbbell length/bulb diameter")
    dent_depth: float = Field(0.3, ge=0, lt=1, description="Radial depth of the dent (unit sphere)")
    dent_width: float = Field(0.8, gt=0, le=np.pi, description="Angular half-width of the dent, radians")
    neck_radius: float = Field(0.35, gt=0)
    bulb_radius: float = Field(1.0, gt=0)
    noise: float = Field(0.0, ge=0, lt=0.5, description="Radial jitter as a fraction of mean edge length")
    seed: int = 0


class RunConfig(BaseModel):
    """Everything the CLI needs for one run"""
    input_path: Optional[Path] = None
    generator: Optional[GeneratorSpec] = None
    preset: Optional[Literal["paper"]] = None
    m: int = Field(1, ge=0)
    phases: List[Tuple[int, int, int]] = Field(default_factory=list)  # (n, k_in, k_out)
    c: Optional[float] = Field(None, gt=0)
    c_rel: Optional[float] = Field(None, gt=0)
    stride: int = Field(200, ge=1)
    out_dir: Path = Path("out")
    metrics_path: Optional[Path] = None
    refresh: RefreshMode = RefreshMode.PER_STEP
    vertex_averaging: VertexAveraging = VertexAveraging.UNIFORM
    dump_curvature: Optional[Path] = None
    verify: bool = False
    progress: bool = False

    @field_validator("phases")
    @classmethod
    def _check_phases(cls, phases: List[Tuple[int, int, int]]) -> List[Tuple[int, int, int]]:
        for n, k_in, k_out in phases:
            if n < 0 or k_in < 0 or k_out < 0 or k_in + k_out < 1:
                raise ValueError(f"Invalid phase {n}:{k_in}:{k_out}")
        return phases

    @model_validator(mode="after")
    def _exclusive_choices(self) -> "RunConfig":
        if (self.input_path is None) == (self.generator is None):
            raise ValueError("Exactly one of input path or generator must be given")
        if (self.c is None) == (self.c_rel is None):
            raise ValueError("Exactly one of c or c_rel must be given")
        if self.preset is not None and self.phases:
            raise ValueError("Give either a preset or explicit phases, not both")
        if self.preset is None and not self.phases:
            self.preset = "paper"
        return self

    @property
    def resolved_metrics_path(self) -> Path:
        return self.metrics_path or self.out_dir / "metrics.csv"

    def build_schedule(self, c: float) -> Schedule:
        """Schedule with an absolute step size C"""
        if self.preset == "paper":
            return Schedule.preset(self.m, c=c, stride=self.stride)
        phases = [
            Phase(n=n, params=MorphParams(k_in=k_in, k_out=k_out, c=c))
            for n, k_in, k_out in self.phases
        ]
        return Schedule(phases=phases, stride=self.stride)


# ============================================================================
# METRICS
# ============================================================================

METRICS_COLUMNS = [
    "iter", "area", "volume", "sphericity", "radius_cv",
    "k_min", "k_max", "k_mean", "k_std",
]


class MetricsRecord(BaseModel):
    """Shape diagnostics at one checkpoint"""
    iteration: int
    area: float
    volume: float
    sphericity: float
    centroid: Point3
    radius_mean: float
    radius_cv: float
    k_min: float
    k_max: float
    k_mean: float
    k_std: float

    def csv_row(self) -> Dict[str, Any]:
        return {
            "iter": self.iteration,
            "area": self.area,
            "volume": self.volume,
            "sphericity": self.sphericity,
            "radius_cv": self.radius_cv,
            "k_min": self.k_min,
            "k_max": self.k_max,
            "k_mean": self.k_mean,
            "k_std": self.k_std,
        }


class RunResult(BaseModel):
    """Outcome of one CLI run"""
    exit_code: int
    records: List[MetricsRecord] = Field(default_factory=list)
    snapshots: List[Path] = Field(default_factory=list)
    failed_iteration: Optional[int] = None
    message: str = ""


# ============================================================================
# VERIFICATION TYPES
# ============================================================================

class VerificationError(BaseModel):
    """Problem found by a verifier"""
    check: str
    element: Optional[str] = None  # e.g. "edge (3, 7)", "face 12"
    message: str
    expected: Optional[Any] = None
    actual: Optional[Any] = None
    severity: Literal["warning", "error", "critical"] = "error"


class VerificationResult(BaseModel):
    """Result from a verifier"""
    verifier_name: str
    passed: bool
    errors: List[VerificationError] = Field(default_factory=list)
    warnings: List[str] = Field(default_factory=list)
