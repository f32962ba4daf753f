"""Stable CW models of Thom spaces over tori and of the circle-quotient
sphere-bundle complex, with Steenrod-square detection of attaching maps.

Cells are generator subsets decorated with a fiber contribution (the Thom
cell of the quaternionic fiber, or the 0-/2-cell of an S^2 fiber) and a
suspension counter. Steenrod squares act on the Thom-class basis u*x_S
through Stiefel-Whitney classes by the Cartan formula; whenever
Sq^g(u*x_L) contains u*x_U the attachment from the upper cell U to the
lower cell L carries the Hopf class that Sq^g detects.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Tuple

from .chern import QUATERNIONIC, REAL, BundleData
from .exterior import ExteriorClass, Monomial

# Fiber kinds and the dimension they add on top of the base subset.
FIBER_POINT = "point"            # basepoint at infinity (Thom construction)
FIBER_THOM = "thom"              # the 4m-cell of the quaternionic fiber
FIBER_SPHERE_ZERO = "sphere_zero"  # 0-cell of the S^2 fiber
FIBER_SPHERE_TWO = "sphere_two"    # 2-cell of the S^2 fiber

_FIBER_ORDER = {FIBER_POINT: 0, FIBER_THOM: 1, FIBER_SPHERE_ZERO: 2,
                FIBER_SPHERE_TWO: 3}
_FIBER_TAG = {FIBER_POINT: "*", FIBER_THOM: "H", FIBER_SPHERE_ZERO: "S0",
              FIBER_SPHERE_TWO: "S2"}

POLICY_THOM = "thom"        # single 0-cell at infinity
POLICY_REDUCED = "reduced"  # one 0-cell designated the basepoint

BASEPOINT_NOTE = (
    "basepoint policy: 'thom' keeps a single 0-cell at infinity; 'reduced' "
    "designates the empty-subset 0-cell as basepoint; basepoint cells are "
    "excluded from attachment labels and assembly columns")

TRIVIAL, ETA_LABEL, NU_ODD, UNKNOWN = "trivial", "eta", "nu_odd", "unknown"


@dataclass(frozen=True)
class StableCell:
    """One stable cell: base subset, fiber contribution, suspension count.

    The dimension is always derived: |base| + fiber offset + suspension.
    """

    base_mask: int
    fiber_part: str
    fiber_offset: int
    suspension: int = 0

    def __post_init__(self):
        if self.fiber_part not in _FIBER_ORDER:
            raise ValueError(f"unknown fiber part {self.fiber_part!r}")
        if self.suspension < 0:
            raise ValueError("suspension must be nonnegative")
        # cache the derived dimension and canonical key (hot in sorting)
        dim = self.base_mask.bit_count() + self.fiber_offset + self.suspension
        object.__setattr__(self, "_dim", dim)
        object.__setattr__(self, "_key",
                           (dim, _FIBER_ORDER[self.fiber_part], self.base_mask,
                            self.suspension))

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def base_indices(self) -> Tuple[int, ...]:
        return Monomial(self.base_mask).indices

    def suspended(self, k: int) -> "StableCell":
        return StableCell(self.base_mask, self.fiber_part, self.fiber_offset,
                          self.suspension + k)

    def sort_key(self):
        return self._key

    def name(self) -> str:
        base = str(Monomial(self.base_mask)) if self.base_mask else "{}"
        out = f"{_FIBER_TAG[self.fiber_part]}{base}"
        if self.suspension:
            out += f"+{self.suspension}"
        return out

    __str__ = name


class AttachLabel(NamedTuple):
    """Stable class of an attaching map plus the rule that decided it."""

    value: str
    justification: str


AttachmentMap = Mapping[Tuple[StableCell, StableCell], AttachLabel]


@dataclass(frozen=True)
class StableCellComplex:
    """A finite stable cell complex together with its bundle of origin.

    `attachments` maps (upper, lower) cell pairs with dimension gap 1..4
    to labels; it is None until infer_attachments has run. `gap3_trivial`
    is the geometric flag (pi_2(SO(3)) = 1) that sphere-bundle complexes
    carry, upgrading gap-3 labels from unknown to trivial.
    """

    cells: Tuple[StableCell, ...]
    bundle: BundleData
    basepoint_policy: str
    attachments: Optional[AttachmentMap] = None
    gap3_trivial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "cells",
                           tuple(sorted(self.cells, key=StableCell.sort_key)))
        if self.attachments is not None and \
                not isinstance(self.attachments, MappingProxyType):
            object.__setattr__(self, "attachments",
                               MappingProxyType(dict(self.attachments)))

    def is_basepoint(self, cell: StableCell) -> bool:
        if self.basepoint_policy == POLICY_THOM:
            return cell.fiber_part == FIBER_POINT
        return cell.fiber_part == FIBER_SPHERE_ZERO and cell.base_mask == 0

    @property
    def basepoint_cell(self) -> Optional[StableCell]:
        for cell in self.cells:
            if self.is_basepoint(cell):
                return cell
        return None

    @property
    def proper_cells(self) -> Tuple[StableCell, ...]:
        return tuple(c for c in self.cells if not self.is_basepoint(c))

    def cells_by_dim(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for cell in self.cells:
            out[cell.dim] = out.get(cell.dim, 0) + 1
        return out

    @property
    def top_cell(self) -> StableCell:
        return max(self.cells, key=StableCell.sort_key)

    def find_cell(self, base_indices: Iterable[int], fiber_part: str) -> StableCell:
        mask = Monomial.from_indices(base_indices).mask
        for cell in self.cells:
            if cell.base_mask == mask and cell.fiber_part == fiber_part:
                return cell
        raise KeyError(f"no cell with base {tuple(base_indices)} and fiber "
                       f"{fiber_part}")

    def sorted_attachments(self):
        if self.attachments is None:
            return []
        cached = getattr(self, "_sorted_attachments", None)
        if cached is None:
            cached = sorted(self.attachments.items(),
                            key=lambda kv: (kv[0][0]._key, kv[0][1]._key))
            object.__setattr__(self, "_sorted_attachments", cached)
        return cached


def thom_cells(bundle: BundleData) -> StableCellComplex:
    """Stable cell model of the Thom space of a quaternionic bundle over
    T^b: one cell per generator subset S, of dimension |S| + 4m, plus the
    0-cell at infinity. The cohomology basis is {u * x_S} by the Thom
    isomorphism."""
    if bundle.field != QUATERNIONIC:
        raise ValueError("Thom cell model requires a quaternionic bundle")
    offset = 4 * bundle.rank
    cells = [StableCell(0, FIBER_POINT, 0)]
    for mask in range(1 << bundle.base_rank):
        cells.append(StableCell(mask, FIBER_THOM, offset))
    return StableCellComplex(tuple(cells), bundle, POLICY_THOM)


def sphere_bundle_quotient(bundle: BundleData) -> StableCellComplex:
    """Circle quotient of the sphere bundle of a rank-1 quaternionic
    bundle: an S^2-bundle, modeled by the sphere bundle of a rank-3 real
    bundle with vanishing Stiefel-Whitney classes.

    Each base subset S contributes a 0-cell (dim |S|) and a 2-cell
    (dim |S|+2) of the fiber; the empty-subset 0-cell is the basepoint.
    The pi_2(SO(3)) flag makes gap-3 attachments trivial.
    """
    if bundle.field != QUATERNIONIC or bundle.rank != 1:
        raise ValueError("the circle quotient needs a rank-1 quaternionic bundle")
    b = bundle.base_rank
    zero2 = ExteriorClass.zero(b, modulus=2)
    quotient = BundleData(
        base_rank=b,
        field=REAL,
        rank=3,
        c1=ExteriorClass.zero(b),
        c2=ExteriorClass.zero(b),
        w=(zero2, zero2, zero2),
        sphere_shift=bundle.sphere_shift,
    )
    cells = []
    for mask in range(1 << b):
        cells.append(StableCell(mask, FIBER_SPHERE_ZERO, 0))
        cells.append(StableCell(mask, FIBER_SPHERE_TWO, 2))
    return StableCellComplex(tuple(cells), quotient, POLICY_REDUCED,
                             gap3_trivial=True)


def sq_thom(i: int, x: ExteriorClass, bundle: BundleData) -> ExteriorClass:
    """Sq^i on a Thom-basis class u*x: the Cartan formula collapses to
    u * (w_i wedge x) because the squares vanish on torus classes.

    `x` is the base part of the class, mod 2; the Thom class u is
    implicit, and the result is the base part of Sq^i(u*x).
    """
    if i not in (1, 2, 3, 4):
        raise ValueError("sq_thom supports Sq^1..Sq^4")
    if x.modulus != 2:
        x = x.mod2()
    return bundle.w_class(i).wedge(x)


def _sq_hits(w_masks, lower_mask: int, upper_mask: int) -> bool:
    """Mod-2 count: does u*x_upper appear in (w wedge x_lower)?"""
    hits = 0
    for wm in w_masks:
        if not wm & lower_mask and (wm | lower_mask) == upper_mask:
            hits ^= 1
    return bool(hits)


def _make_labeler(complex_: StableCellComplex, gap: int):
    """A function (upper, lower) -> AttachLabel for one dimension gap.

    Constant labels are shared instances; the per-pair Sq detection runs
    on raw masks, and only detected pairs get a bespoke justification.
    """
    bundle = complex_.bundle
    if gap == 1:
        label = AttachLabel(TRIVIAL, "adjacent attaching map: the cellular "
                            "differential vanishes (every cell survives in "
                            "the homology of the torus model)")
        return lambda upper, lower: label
    if gap == 3:
        if complex_.gap3_trivial:
            label = AttachLabel(TRIVIAL, "pi_2(SO(3)) is trivial: the framed "
                                "normal 2-sphere bounds, so the attaching "
                                "map is trivial")
        else:
            label = AttachLabel(UNKNOWN, "gap-3 attaching class undetermined "
                                "(could be eta^2); no detection rule applies")
        return lambda upper, lower: label
    # gaps 2 and 4: Steenrod detection through w_gap
    detected_value = ETA_LABEL if gap == 2 else NU_ODD
    hopf = "eta" if gap == 2 else "odd multiples of nu"
    w = bundle.w_class(gap)
    if gap == 2:
        miss = AttachLabel(TRIVIAL, f"eta excluded: Sq^2(u*x) = u*(w2^x) "
                           f"misses the upper cell (w2 = {w}); Sq^2 detects "
                           "eta exactly, so the class is trivial")
    else:
        miss = AttachLabel(UNKNOWN, f"Sq^4(u*x) = u*(w4^x) misses the upper "
                           f"cell (w4 = {w}); even multiples of nu are "
                           "undetected, so the class stays unknown")
    if w.is_zero:
        return lambda upper, lower: miss
    w_masks = tuple(m.mask for m in w.support())

    def labeler(upper: StableCell, lower: StableCell) -> AttachLabel:
        if (upper.fiber_part == FIBER_THOM and lower.fiber_part == FIBER_THOM
                and _sq_hits(w_masks, lower.base_mask, upper.base_mask)):
            return AttachLabel(
                detected_value,
                f"Sq^{gap} detects {hopf}: Sq^{gap}(u*x{Monomial(lower.base_mask)})"
                f" contains u*x{Monomial(upper.base_mask)} via w{gap} = {w}")
        return miss

    return labeler


def infer_attachments(complex_: StableCellComplex) -> StableCellComplex:
    """Label every (upper, lower) cell pair with dimension gap 1..4.

    Deterministic: labels depend only on the bundle data and the cell
    pair. Basepoint cells carry no labels.
    """
    by_dim: Dict[int, list] = {}
    for cell in complex_.proper_cells:
        by_dim.setdefault(cell.dim, []).append(cell)
    labelers = {gap: _make_labeler(complex_, gap) for gap in (1, 2, 3, 4)}
    labels: Dict[Tuple[StableCell, StableCell], AttachLabel] = {}
    for dim, uppers in sorted(by_dim.items()):
        for gap in (1, 2, 3, 4):
            lowers = by_dim.get(dim - gap)
            if not lowers:
                continue
            labeler = labelers[gap]
            for upper in uppers:
                for lower in lowers:
                    labels[(upper, lower)] = labeler(upper, lower)
    return StableCellComplex(complex_.cells, complex_.bundle,
                             complex_.basepoint_policy, labels,
                             complex_.gap3_trivial)


def suspend(complex_: StableCellComplex, k: int) -> StableCellComplex:
    """Shift every cell up by k; labels ride along unchanged."""
    if k < 0:
        raise ValueError("suspension must be nonnegative")
    if k == 0:
        return complex_
    lifted = {c: c.suspended(k) for c in complex_.cells}
    attachments = None
    if complex_.attachments is not None:
        attachments = {(lifted[u], lifted[l]): label
                       for (u, l), label in complex_.attachments.items()}
    return StableCellComplex(tuple(lifted.values()), complex_.bundle,
                             complex_.basepoint_policy, attachments,
                             complex_.gap3_trivial)


def skeletal_quotient(complex_: StableCellComplex, k: int) -> StableCellComplex:
    """Collapse the k-skeleton: cells of dimension <= k disappear, and all
    attachments touching them are dropped."""
    cells = tuple(c for c in complex_.cells if c.dim > k)
    kept = set(cells)
    attachments = None
    if complex_.attachments is not None:
        attachments = {pair: label
                       for pair, label in complex_.attachments.items()
                       if pair[0] in kept and pair[1] in kept}
    return StableCellComplex(cells, complex_.bundle,
                             complex_.basepoint_policy, attachments,
                             complex_.gap3_trivial)


def complex_to_dict(complex_: StableCellComplex, full_labels: bool = False) -> dict:
    """JSON-ready description: cells, dims, label counts, detected labels."""
    cells = [{
        "name": cell.name(),
        "base": list(cell.base_indices),
        "fiber": cell.fiber_part,
        "suspension": cell.suspension,
        "dim": cell.dim,
        "basepoint": complex_.is_basepoint(cell),
    } for cell in complex_.cells]
    out = {
        "basepoint_policy": complex_.basepoint_policy,
        "gap3_trivial_flag": complex_.gap3_trivial,
        "cells": cells,
        "cells_by_dim": {str(d): n
                         for d, n in sorted(complex_.cells_by_dim().items())},
    }
    if complex_.attachments is not None:
        counts: Dict[str, int] = {}
        detected = []
        for (upper, lower), label in complex_.sorted_attachments():
            gap = upper.dim - lower.dim
            key = f"gap{gap}:{label.value}"
            counts[key] = counts.get(key, 0) + 1
            if label.value in (ETA_LABEL, NU_ODD):
                detected.append({
                    "upper": upper.name(), "lower": lower.name(),
                    "dims": [upper.dim, lower.dim],
                    "label": label.value,
                    "justification": label.justification,
                })
        out["label_counts"] = dict(sorted(counts.items()))
        out["detected_labels"] = detected
        if full_labels:
            out["labels"] = [{
                "upper": u.name(), "lower": l.name(), "label": lab.value,
                "justification": lab.justification,
            } for (u, l), lab in complex_.sorted_attachments()]
    return out
