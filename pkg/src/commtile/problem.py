"""Problem descriptions: linear access maps over a computation lattice Z^d."""

from __future__ import annotations

from dataclasses import dataclass, field

from .intlinalg import IntMatrix


class DocumentError(ValueError):
    """Raised for malformed problem documents."""


@dataclass(frozen=True)
class HblProblem:
    """A dependence-free loop nest abstracted to its array-access maps.

    Each map is an integer matrix with one row per array subscript;
    column j carries the coefficients of loop index j.
    """

    dim: int
    maps: tuple[IntMatrix, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if not self.maps:
            raise ValueError("at least one access map is required")
        for m in self.maps:
            if m.ncols != self.dim:
                raise ValueError("every map needs exactly dim columns")
        if self.names and len(self.names) != len(self.maps):
            raise ValueError("names, when given, must match the maps")

    @property
    def n_maps(self) -> int:
        return len(self.maps)

    def map_names(self) -> tuple[str, ...]:
        if self.names:
            return self.names
        return tuple(f"A{i + 1}" for i in range(self.n_maps))


@dataclass(frozen=True)
class ProblemDocument:
    """Parsed user input: index names plus named subscript-row lists."""

    dimension: int
    arrays: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...]
    indices: tuple[str, ...] = ()

    def to_problem(self) -> HblProblem:
        maps = []
        for _, rows in self.arrays:
            if rows:
                maps.append(IntMatrix.from_rows([list(r) for r in rows]))
            else:
                maps.append(IntMatrix(0, self.dimension, ()))
        return HblProblem(self.dimension, tuple(maps), tuple(n for n, _ in self.arrays))


def document_from_json(obj) -> ProblemDocument:
    """Validate and load the JSON problem schema:
    {"dimension": d, "maps": [{"name": ..., "rows": [[int, ...], ...]}, ...]}
    """
    if not isinstance(obj, dict):
        raise DocumentError("problem document must be a JSON object")
    dim = obj.get("dimension")
    if not isinstance(dim, int) or dim < 1:
        raise DocumentError("'dimension' must be a positive integer")
    maps = obj.get("maps")
    if not isinstance(maps, list) or not maps:
        raise DocumentError("'maps' must be a non-empty list")
    indices = obj.get("indices", [])
    if indices and (not isinstance(indices, list) or len(indices) != dim or not all(isinstance(s, str) for s in indices)):
        raise DocumentError("'indices', when given, must list one name per dimension")
    arrays = []
    seen = set()
    for k, entry in enumerate(maps):
        if not isinstance(entry, dict):
            raise DocumentError(f"maps[{k}] must be an object")
        name = entry.get("name", f"A{k + 1}")
        if not isinstance(name, str) or not name:
            raise DocumentError(f"maps[{k}].name must be a non-empty string")
        if name in seen:
            raise DocumentError(f"duplicate array name {name!r}")
        seen.add(name)
        rows = entry.get("rows")
        if not isinstance(rows, list):
            raise DocumentError(f"maps[{k}].rows must be a list of coefficient rows")
        clean = []
        for r in rows:
            if not isinstance(r, list) or len(r) != dim or not all(isinstance(v, int) for v in r):
                raise DocumentError(f"maps[{k}].rows entries must be integer rows of length {dim}")
            clean.append(tuple(r))
        arrays.append((name, tuple(clean)))
    return ProblemDocument(dim, tuple(arrays), tuple(indices))


def document_to_json(doc: ProblemDocument) -> dict:
    out = {"dimension": doc.dimension}
    if doc.indices:
        out["indices"] = list(doc.indices)
    out["maps"] = [{"name": n, "rows": [list(r) for r in rows]} for n, rows in doc.arrays]
    return out
