"""Label-based convenience constructors.

Fixtures and tests describe complexes and DGLAs by naming basis elements;
these helpers translate the label dictionaries into the matrix form the core
types expect.  Coefficients may be ints, Fractions, or field scalars.
"""

from __future__ import annotations

from typing import Mapping, Optional, Sequence

from .complexes import ChainMap, CochainComplex, GradedVectorSpace
from .dgla import Dgla
from .fields import Field, Matrix, as_scalar


def _degree_of(space: GradedVectorSpace, label: str) -> int:
    for deg in space.degrees:
        if label in space.labels(deg):
            return deg
    raise KeyError(f"unknown basis label {label!r}")


def matrix_from_labels(
    field: Field,
    row_labels: Sequence[str],
    col_labels: Sequence[str],
    entries: Mapping[str, Mapping[str, object]],
) -> Matrix:
    """Entries keyed source label -> {target label: coefficient}."""
    ri = {lab: i for i, lab in enumerate(row_labels)}
    ci = {lab: j for j, lab in enumerate(col_labels)}
    rows = [[field.zero] * len(col_labels) for _ in row_labels]
    for src, targets in entries.items():
        j = ci[src]
        for dst, c in targets.items():
            rows[ri[dst]][j] = as_scalar(field, c)
    return Matrix(field, [tuple(r) for r in rows], len(col_labels))


def complex_from_labels(
    field: Field,
    labels: Mapping[int, Sequence[str]],
    d: Optional[Mapping[str, Mapping[str, object]]] = None,
) -> CochainComplex:
    """Complex whose differential is given by "source label -> targets" entries."""
    space = GradedVectorSpace(labels)
    per_degree: dict[int, dict[str, dict[str, object]]] = {}
    for src, targets in (d or {}).items():
        deg = _degree_of(space, src)
        for dst, c in targets.items():
            if _degree_of(space, dst) != deg + 1:
                raise ValueError(f"d({src}) hits {dst}, not one degree up")
        per_degree.setdefault(deg, {})[src] = dict(targets)
    blocks = {
        deg: matrix_from_labels(field, space.labels(deg + 1), space.labels(deg), ent)
        for deg, ent in per_degree.items()
    }
    return CochainComplex(field, space, blocks)


def chain_map_from_labels(
    source: CochainComplex,
    target: CochainComplex,
    entries: Mapping[str, Mapping[str, object]],
    check: bool = True,
) -> ChainMap:
    field = source.field
    per_degree: dict[int, dict[str, dict[str, object]]] = {}
    for src, targets in entries.items():
        deg = _degree_of(source.space, src)
        per_degree.setdefault(deg, {})[src] = dict(targets)
    blocks = {
        deg: matrix_from_labels(field, target.space.labels(deg), source.space.labels(deg), ent)
        for deg, ent in per_degree.items()
    }
    return ChainMap(source, target, blocks, check=check)


def dgla_from_labels(
    field: Field,
    labels: Mapping[int, Sequence[str]],
    d: Optional[Mapping[str, Mapping[str, object]]] = None,
    brackets: Optional[Mapping[tuple[str, str], Mapping[str, object]]] = None,
    name: str = "dgla",
) -> Dgla:
    """DGLA from label dictionaries; no axiom checking (use validate_dgla)."""
    space = GradedVectorSpace(labels)
    per_degree: dict[int, dict[str, dict[str, object]]] = {}
    for src, targets in (d or {}).items():
        deg = _degree_of(space, src)
        per_degree.setdefault(deg, {})[src] = dict(targets)
    blocks = {
        deg: matrix_from_labels(field, space.labels(deg + 1), space.labels(deg), ent)
        for deg, ent in per_degree.items()
    }
    return Dgla(field, space, blocks, brackets=brackets, name=name)


def morphism_from_labels(source: Dgla, target: Dgla,
                         entries: Mapping[str, Mapping[str, object]],
                         name: str = "morphism", check: bool = True):
    from .dgla import DglaMorphism

    field = source.field
    per_degree: dict[int, dict[str, dict[str, object]]] = {}
    for src, targets in entries.items():
        deg = _degree_of(source.space, src)
        per_degree.setdefault(deg, {})[src] = dict(targets)
    blocks = {
        deg: matrix_from_labels(field, target.space.labels(deg), source.space.labels(deg), ent)
        for deg, ent in per_degree.items()
    }
    return DglaMorphism(source, target, blocks, name=name, check=check)
