"""
Manifold Verifier - checks that a mesh is a valid closed oriented surface.
Collects every problem into a VerificationResult instead of raising.
"""

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../..'))

from typing import List, Optional

import numpy as np

from src.core.mesh import TriMesh, degenerate_area_threshold, face_areas, signed_volume
from src.core.settings import Settings, resolve
from src.core.types import VerificationError, VerificationResult

MAX_REPORTED = 10  # per check


class ManifoldVerifier:
    """
    Verifies the standing assumptions of the curvature morph.
    Checks:
    - Every edge has exactly two incident faces
    - Neighbouring faces traverse their shared edge in opposite directions
    - No face is degenerate, no vertex is unused
    - Euler characteristic is 2 (sphere topology) - warning only
    - Signed volume is positive (outward winding)
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.name = "Manifold Verifier"
        self.settings = resolve(settings)

    def verify_mesh(self, mesh: TriMesh) -> VerificationResult:
        """
        Verify one mesh

        Args:
            mesh: mesh to check

        Returns:
            VerificationResult with any errors found
        """
        errors: List[VerificationError] = []
        warnings: List[str] = []

        if mesh.n_faces == 0:
            errors.append(VerificationError(
                check="non_empty",
                message="Mesh has no faces",
                severity="critical",
            ))
            return VerificationResult(verifier_name=self.name, passed=False, errors=errors)

        faces = mesh.faces
        tails = faces.reshape(-1)
        heads = np.roll(faces, -1, axis=1).reshape(-1)

        # Undirected edge multiplicity
        undirected = np.column_stack((np.minimum(tails, heads), np.maximum(tails, heads)))
        edges, counts = np.unique(undirected, axis=0, return_counts=True)
        for (u, v), count in list(zip(edges[counts != 2], counts[counts != 2]))[:MAX_REPORTED]:
            kind = "boundary" if count == 1 else "non-manifold"
            errors.append(VerificationError(
                check="closed_manifold",
                element=f"edge ({int(u)}, {int(v)})",
                message=f"{kind} edge shared by {int(count)} face(s)",
                expected=2,
                actual=int(count),
                severity="critical",
            ))

        # A directed half-edge appearing twice means two faces run the same way
        directed, dcounts = np.unique(np.column_stack((tails, heads)), axis=0, return_counts=True)
        for u, v in directed[dcounts > 1][:MAX_REPORTED]:
            errors.append(VerificationError(
                check="orientation",
                element=f"edge ({int(min(u, v))}, {int(max(u, v))})",
                message=f"half-edge {int(u)}->{int(v)} is used by more than one face",
                severity="error",
            ))

        areas = face_areas(mesh)
        threshold = degenerate_area_threshold(mesh, self.settings)
        for f in np.nonzero(~((areas >= threshold) & (areas > 0)))[0][:MAX_REPORTED]:
            errors.append(VerificationError(
                check="degenerate_face",
                element=f"face {int(f)}",
                message=f"area {areas[f]:.3e} below tolerance {threshold:.3e}",
                severity="error",
            ))

        used = np.zeros(mesh.n_vertices, dtype=bool)
        used[faces.reshape(-1)] = True
        for p in np.nonzero(~used)[0][:MAX_REPORTED]:
            errors.append(VerificationError(
                check="isolated_vertex",
                element=f"vertex {int(p)}",
                message="vertex is not used by any face",
                severity="error",
            ))

        euler = int(used.sum()) - len(edges) + mesh.n_faces
        if euler != 2:
            warnings.append(f"Euler characteristic is {euler}, expected 2 for a sphere-like surface")

        volume = signed_volume(mesh)
        if not volume > 0:
            errors.append(VerificationError(
                check="outward_orientation",
                message="signed volume is not positive - faces wound inward",
                expected="> 0",
                actual=volume,
                severity="error",
            ))

        return VerificationResult(
            verifier_name=self.name,
            passed=len(errors) == 0,
            errors=errors,
            warnings=warnings,
        )


if __name__ == "__main__":
    from src.tools.generators import cube

    verifier = ManifoldVerifier()
    for label, mesh in (
        ("cube", cube()),
        ("cube, reversed winding", cube().reversed()),
        ("open cube (one face removed)", TriMesh(cube().vertices, cube().faces[1:])),
    ):
        result = verifier.verify_mesh(mesh)
        print(f"\n{label}: passed={result.passed}, errors={len(result.errors)}")
        for error in result.errors:
            print(f"  {error.check}: {error.element or ''} {error.message}")
        for warning in result.warnings:
            print(f"  warning: {warning}")
