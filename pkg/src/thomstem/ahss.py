"""Assembly of the stable cohomotopy group {complex, S^N} cell by cell,
and evaluation of user-supplied class assignments against it.

Each cell contributes the stable stem of (dim - N); attaching-map labels
drive the differentials. The engine implements exactly the patterns the
verdicts need: the cellular d1 vanishes on torus models, an eta label
drives a d2 onto the neighbouring stem, an odd-nu label drives a d4 onto
a Z/24 column, and every other potentially nonzero configuration is
reported as unknown rather than guessed. Surviving columns are
direct-summed; extension problems are ignored and noted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from . import stems
from .stems import AbelianGroup, OutOfTableError, StemElement, TRIVIAL_GROUP
from .thom import (ETA_LABEL, FIBER_SPHERE_ZERO, NU_ODD, POLICY_REDUCED,
                   StableCell, StableCellComplex, TRIVIAL, UNKNOWN,
                   infer_attachments)

SURVIVES, KILLED, REDUCED = "survives", "killed", "reduced"
# column status "unknown" reuses thom.UNKNOWN

VERDICT_TRIVIAL, VERDICT_NONTRIVIAL, VERDICT_UNKNOWN = (
    "trivial", "nontrivial", "unknown")


@dataclass
class ColumnEntry:
    """One cell's column: the stem it contributes and what happened to it."""

    cell: StableCell
    stem_q: int
    group: AbelianGroup
    status: str = SURVIVES
    killer: Optional[str] = None
    reduced_index: Optional[int] = None

    def to_dict(self) -> dict:
        out = {
            "cell": self.cell.name(),
            "dim": self.cell.dim,
            "stem": self.stem_q,
            "group": self.group.pretty(),
            "status": self.status,
            "killer": self.killer,
        }
        if self.reduced_index is not None:
            out["reduced_index"] = self.reduced_index
        return out


@dataclass
class GroupReport:
    """Result of assembling {complex, S^N}.

    `assembled` is exact when no entry is unknown; otherwise `bounds`
    holds the (all unknowns die, all unknowns survive) pair.
    """

    target_n: int
    entries: Tuple[ColumnEntry, ...]
    assembled: Optional[AbelianGroup]
    bounds: Optional[Tuple[AbelianGroup, AbelianGroup]]
    notes: Tuple[str, ...]
    differentials: Tuple[str, ...]
    complex: StableCellComplex = field(repr=False)

    def entry_for(self, cell: StableCell) -> ColumnEntry:
        for entry in self.entries:
            if entry.cell == cell:
                return entry
        raise KeyError(f"no column for cell {cell.name()}")

    def blocks(self) -> Dict[str, AbelianGroup]:
        """Surviving contribution split by fiber kind (unknowns excluded)."""
        out: Dict[str, AbelianGroup] = {}
        for entry in self.entries:
            if entry.status in (SURVIVES, REDUCED):
                key = entry.cell.fiber_part
                out[key] = out.get(key, TRIVIAL_GROUP) + entry.group
        return out

    def to_dict(self) -> dict:
        out = {
            "target": self.target_n,
            "entries": [e.to_dict() for e in self.entries],
            "assembled": self.assembled.pretty() if self.assembled else None,
            "notes": list(self.notes),
        }
        if self.bounds:
            out["assembled_bounds"] = {
                "lower_quotient": self.bounds[0].pretty(),
                "upper_sum": self.bounds[1].pretty(),
            }
        out["blocks"] = {k: g.pretty() for k, g in sorted(self.blocks().items())}
        out["differentials"] = list(self.differentials)
        return out


ClassAssignment = Mapping[StableCell, StemElement]


def _surviving_sum(entries) -> AbelianGroup:
    total = TRIVIAL_GROUP
    for entry in entries:
        if entry.status in (SURVIVES, REDUCED):
            total = total + entry.group
    return total


def assemble(complex_: StableCellComplex, target_n: int) -> GroupReport:
    """Assemble {complex, S^N} from cell columns and attachment labels."""
    if complex_.attachments is None:
        complex_ = infer_attachments(complex_)

    entries: List[ColumnEntry] = []
    index: Dict[StableCell, ColumnEntry] = {}
    for cell in complex_.proper_cells:
        q = cell.dim - target_n
        entry = ColumnEntry(cell, q, stems.stem_group(q))
        entries.append(entry)
        index[cell] = entry

    notes = [
        "surviving columns are direct-summed; extension problems in reading "
        "the limit page are ignored",
        "basepoint cells contribute no column",
    ]
    differentials: List[str] = []

    # page order: all d2 effects, then d4; gap-3 labels never act
    # definitively (trivial = no differential, unknown handled last).
    _run_eta_rules(complex_, index, differentials)
    _run_nu_rules(complex_, index, differentials, notes)
    _mark_unknowns(complex_, index, notes)

    if complex_.basepoint_policy == POLICY_REDUCED:
        for entry in entries:
            if entry.cell.fiber_part == FIBER_SPHERE_ZERO and entry.stem_q >= 0:
                notes.append(
                    f"extra base-block cell {entry.cell.name()} (sphere 0-cell "
                    f"fiber) contributes {entry.group.pretty()} at stem "
                    f"{entry.stem_q} on top of the fiber 2-cell block; the "
                    "binomial count covers only the fiber 2-cell block")

    unknowns = [e for e in entries if e.status == UNKNOWN]
    if unknowns:
        lower = _surviving_sum(entries)
        upper = lower
        for entry in unknowns:
            upper = upper + entry.group
        assembled, bounds = None, (lower, upper)
        notes.append(f"{len(unknowns)} column(s) unknown: assembled group "
                     "reported as bounds (lower = unknowns die, upper = "
                     "unknowns survive)")
    else:
        assembled, bounds = _surviving_sum(entries), None

    if not differentials:
        differentials.append("direct sum, no differentials")

    return GroupReport(target_n, tuple(entries), assembled, bounds,
                       tuple(notes), tuple(differentials), complex_)


def _sorted_labelled(complex_, value):
    for (upper, lower), label in complex_.sorted_attachments():
        if label.value == value:
            yield upper, lower, label


def _check_gap(upper, lower, expected, value):
    # a differential d_r spans exactly gap r; anything else means the
    # labels were built by hand and are inconsistent
    gap = upper.dim - lower.dim
    if gap != expected:
        raise ValueError(
            f"label {value} on a gap-{gap} attachment {upper.name()} -> "
            f"{lower.name()}: d{expected} spans gap {expected} only")


def _run_eta_rules(complex_, index, differentials):
    """d2 driven by eta attachments.

    Kill side: an upper column at stem 1 or 2 is hit from the lower cell's
    column one degree over, and composition with eta (Z -> Z/2 onto, or
    Z/2 -> Z/2 iso) wipes it out. Source side: a lower column at stem 0
    is reduced to the kernel 2Z (still Z); at stem 1 it is consumed
    entirely (eta composes to an isomorphism onto the next stem).
    """
    for upper, lower, label in _sorted_labelled(complex_, ETA_LABEL):
        _check_gap(upper, lower, 2, ETA_LABEL)
        up, low = index[upper], index[lower]
        if up.stem_q in (1, 2) and up.status != KILLED and low.status != KILLED:
            # check the composition is onto: (generator of source stem) o eta
            source = stems.one(1) if up.stem_q == 1 else stems.eta()
            if not stems.compose(source, stems.eta()).is_zero:
                up.status = KILLED
                up.killer = f"d2 from {lower.name()}"
                differentials.append(
                    f"d2: column {upper.name()} ({up.group.pretty()}) killed "
                    f"by composition with eta from {lower.name()}")
        if low.stem_q == 0 and low.status == SURVIVES:
            low.status = REDUCED
            low.reduced_index = 2
            low.killer = f"d2 into {upper.name()}"
            differentials.append(
                f"d2: column {lower.name()} reduced to index 2 (kernel of "
                f"composition with eta into {upper.name()}); still Z abstractly")
        elif low.stem_q == 1 and low.status == SURVIVES:
            low.status = KILLED
            low.killer = f"d2 into {upper.name()} (source consumed)"
            differentials.append(
                f"d2: column {lower.name()} consumed as a d2 source onto "
                f"{upper.name()} (eta composes injectively)")


def _eta_drained_sources(complex_, index):
    """Cells whose Z column one degree over already fired a d2.

    An eta attachment whose upper cell sits at in-report stem 1 consumed
    half of the lower cell's source column (kernel 2Z); a later d4 out of
    that column only reaches the even multiples of nu and is no longer
    onto Z/24.
    """
    drained = set()
    for upper, lower, label in _sorted_labelled(complex_, ETA_LABEL):
        if index[upper].stem_q == 1:
            drained.add(lower)
    return drained


def _run_nu_rules(complex_, index, differentials, notes):
    """d4 driven by odd-nu attachments.

    Kill side: an upper Z/24 column (stem 3) dies because any odd multiple
    of nu generates pi_3, so the composition from the lower cell's Z
    column is onto. Source side: a lower Z column at stem 0 is reduced to
    the kernel 24Z (still Z).
    """
    drained = _eta_drained_sources(complex_, index)
    for upper, lower, label in _sorted_labelled(complex_, NU_ODD):
        _check_gap(upper, lower, 4, NU_ODD)
        up, low = index[upper], index[lower]
        if up.stem_q == 3 and up.status != KILLED and low.status != KILLED:
            if lower in drained:
                up.status = UNKNOWN
                up.killer = None
                notes.append(
                    f"column {upper.name()} marked unknown: the d4 source "
                    f"{lower.name()} was reduced by an earlier d2, so the "
                    "composition with nu reaches only even multiples")
                continue
            # any odd multiple of nu generates pi_3, so the composition
            # from the intact source Z column is onto
            if not stems.compose(stems.one(1), stems.nu_multiple(1)).is_zero:
                up.status = KILLED
                up.killer = f"d4 from {lower.name()}"
                differentials.append(
                    f"d4: column {upper.name()} (Z/24) killed by composition "
                    f"with nu from {lower.name()}; the source Z column one "
                    "degree over is reduced to index 24")
                notes.append(
                    f"d4 source recorded as {lower.name()}, the first "
                    "nu-attached cell in canonical order; any of the "
                    "nu-attached cells kills the column")
        if low.stem_q == 0 and low.status == SURVIVES:
            low.status = REDUCED
            low.reduced_index = 24
            low.killer = f"d4 into {upper.name()}"
            differentials.append(
                f"d4: column {lower.name()} reduced to index 24 (kernel of "
                f"composition with nu into {upper.name()}); still Z abstractly")


def _mark_unknowns(complex_, index, notes):
    """Columns that could be hit only through unknown or unhandled labels.

    A label threatens the upper column when the source stem (one degree
    over: stem_q(upper) - gap + 1) carries a nonzero group. Definitively
    killed columns stay killed: the kill was a surjection and holds
    whatever the unknown maps do.
    """
    if complex_.attachments is None:
        return
    for (upper, lower), label in complex_.sorted_attachments():
        if label.value == TRIVIAL:
            continue
        up = index[upper]
        if up.status == KILLED or up.group.is_trivial:
            continue
        gap = upper.dim - lower.dim
        handled = (label.value == ETA_LABEL and up.stem_q in (1, 2)) or \
                  (label.value == NU_ODD and up.stem_q == 3)
        if handled:
            continue
        source_q = up.stem_q - gap + 1
        if source_q < 0:
            continue
        try:
            source_group = stems.stem_group(source_q)
        except OutOfTableError:
            source_group = None
        if source_group is None or not source_group.is_trivial:
            up.status = UNKNOWN
            up.killer = None
            notes.append(
                f"column {upper.name()} marked unknown: reachable through a "
                f"{label.value} gap-{gap} label from {lower.name()} "
                f"(source stem {source_q})")


def evaluate_class(report: GroupReport, assignment: ClassAssignment) -> str:
    """Verdict for a class given by its per-cell components.

    Nontrivial as soon as one nonzero component sits in a surviving (or
    merely index-reduced) column; trivial when every component is zero or
    lives in a killed column; unknown when the deciding columns are
    unknown.
    """
    saw_unknown = False
    saw_nonzero_survivor = False
    for cell, element in assignment.items():
        try:
            entry = report.entry_for(cell)
        except KeyError:
            raise ValueError(
                f"cell {cell.name()} carries no assembly column (basepoint "
                "cells and collapsed cells cannot carry a class)")
        if element.q != entry.stem_q:
            raise ValueError(
                f"degree mismatch: element {element} has stem {element.q} but "
                f"cell {cell.name()} contributes stem {entry.stem_q}")
        if element.is_zero:
            continue
        if entry.status in (SURVIVES, REDUCED):
            saw_nonzero_survivor = True
        elif entry.status == UNKNOWN:
            saw_unknown = True
    if saw_nonzero_survivor:
        return VERDICT_NONTRIVIAL
    if saw_unknown:
        return VERDICT_UNKNOWN
    return VERDICT_TRIVIAL


def vanishing_certificate(report: GroupReport,
                          assignment: ClassAssignment) -> str:
    """Human-readable chain of the rules behind a verdict."""
    lines = [f"target: S^{report.target_n}"]
    nonzero = {cell: el for cell, el in assignment.items() if not el.is_zero}
    if not nonzero:
        lines.append("class assignment: zero class")
    else:
        for cell in sorted(nonzero, key=StableCell.sort_key):
            lines.append(f"class assignment: {nonzero[cell]} on cell "
                         f"{cell.name()} (dim {cell.dim})")
    if report.differentials == ("direct sum, no differentials",):
        lines.append("assembly: direct sum, no differentials")
    else:
        for diff in report.differentials:
            lines.append(f"assembly: {diff}")
    for cell in sorted(nonzero, key=StableCell.sort_key):
        entry = report.entry_for(cell)
        line = (f"column {cell.name()} (stem {entry.stem_q}, "
                f"{entry.group.pretty()}): {entry.status}")
        if entry.killer:
            line += f" [{entry.killer}]"
        lines.append(line)
        if entry.status == KILLED and report.complex.attachments:
            for (upper, lower), label in report.complex.sorted_attachments():
                if upper == cell and label.value in (ETA_LABEL, NU_ODD):
                    lines.append(f"  label {label.value}: {label.justification}")
    verdict = evaluate_class(report, assignment)
    lines.append(f"verdict: {verdict}")
    return "\n".join(lines)
