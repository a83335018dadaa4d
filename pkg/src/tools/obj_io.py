"""
Wavefront OBJ reader/writer - the subset needed for closed triangle meshes.

Supported records: '#' comments, 'v x y z', 'f i j k [l ...]'.
Face indices are 1-based (negative = relative), slash suffixes are ignored,
polygons are fan-triangulated from their first vertex.
"""

from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from loguru import logger

from src.core.errors import MalformedFileError, MeshError, MeshIndexError, MeshWriteError
from src.core.mesh import TriMesh, check_degenerate_faces
from src.core.settings import Settings

PathLike = Union[str, Path]

# Records that carry no geometry we need; skipped silently
IGNORED_RECORDS = {"vn", "vt", "vp", "o", "g", "s", "usemtl", "mtllib", "l"}


def _parse_index(token: str, n_vertices: int, line_number: int) -> int:
    head = token.split("/", 1)[0]
    try:
        idx = int(head)
    except ValueError as e:
        raise MalformedFileError(f"Invalid face index {token!r}", line_number) from e
    if idx == 0:
        raise MeshIndexError(f"line {line_number}: face index 0 is not valid in OBJ (1-based)")
    # Relative indices count back from the vertices read so far
    resolved = idx - 1 if idx > 0 else n_vertices + idx
    return resolved


def load_obj(path: PathLike, settings: Optional[Settings] = None) -> TriMesh:
    """
    Read an OBJ file into a TriMesh.

    Args:
        path: OBJ file path

    Returns:
        TriMesh with 0-based indices; quads and polygons fan-triangulated

    Raises:
        FileNotFoundError: file does not exist
        MalformedFileError: unparsable record (with line number)
        MeshIndexError: face references a missing vertex
        DegenerateFaceError: a face has zero area
    """
    path = Path(path)
    vertices: List[List[float]] = []
    faces: List[List[int]] = []

    with path.open("rb") as fh:
        for line_number, data in enumerate(fh, start=1):
            try:
                raw = data.decode("utf-8")
            except UnicodeDecodeError as e:
                raise MalformedFileError("Line is not valid UTF-8", line_number) from e
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            keyword, *fields = line.split()

            if keyword == "v":
                if len(fields) < 3:
                    raise MalformedFileError("Vertex needs 3 coordinates", line_number)
                try:
                    coords = [float(x) for x in fields[:3]]
                except ValueError as e:
                    raise MalformedFileError(f"Invalid vertex coordinate in {line!r}", line_number) from e
                if not np.all(np.isfinite(coords)):
                    raise MalformedFileError("Vertex coordinate is not finite", line_number)
                vertices.append(coords)

            elif keyword == "f":
                if len(fields) < 3:
                    raise MalformedFileError("Face needs at least 3 vertices", line_number)
                polygon = [_parse_index(tok, len(vertices), line_number) for tok in fields]
                for idx in polygon:
                    if not 0 <= idx < len(vertices):
                        raise MeshIndexError(
                            f"line {line_number}: face references vertex {idx + 1}, "
                            f"only {len(vertices)} defined"
                        )
                # Fan from the first vertex: (0,1,2), (0,2,3), ...
                for k in range(1, len(polygon) - 1):
                    faces.append([polygon[0], polygon[k], polygon[k + 1]])

            elif keyword in IGNORED_RECORDS:
                continue

            else:
                raise MalformedFileError(f"Unsupported record {keyword!r}", line_number)

    mesh = TriMesh(vertices, faces)
    check_degenerate_faces(mesh, settings)
    logger.debug(f"Loaded {path}: {mesh.n_vertices} vertices, {mesh.n_faces} faces")
    return mesh


def save_obj(mesh: TriMesh, path: PathLike) -> None:
    """
    Write a TriMesh as OBJ with 17 significant digits (exact round-trip).

    Raises:
        MeshError: mesh has no vertices or faces
        MeshWriteError: the file cannot be written
    """
    if mesh.n_vertices == 0 or mesh.n_faces == 0:
        raise MeshError("Refusing to write an empty mesh")

    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            np.savetxt(fh, mesh.vertices, fmt="v %.17g %.17g %.17g")
            np.savetxt(fh, mesh.faces + 1, fmt="f %d %d %d")
    except OSError as e:
        raise MeshWriteError(f"Cannot write {path}: {e}") from e
