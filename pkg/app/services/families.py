"""
Two-strand torus knots T(2, m) and twist knots K_n.

Closed-form HOMFLY values, braid presentations, constructive untwisting
witnesses, and the divisor characterization checked over an (n, k) grid.
"""
import asyncio
import dataclasses
import logging
from math import lcm
from typing import List, Optional, Tuple

from app.algebra.poly import A, ZZ, LaurentPoly2, specialize_a
from app.core.exceptions import DomainError, LinkNotKnotError
from app.knots.braid import BraidWord, format_braid
from app.knots.homfly import two_strand_homfly
from app.schemas.knots import FamilyKind, MoveFamily
from app.schemas.reports import (
    BraidIndexCell,
    FamilyInstanceRef,
    Move,
    MoveSequence,
    Prop6Cell,
    Prop6Report,
    Verdict,
)
from app.services.obstruction import braid_index_lb_after_twist, fused_tbar_verdict, t_test

logger = logging.getLogger(__name__)

# a z P(H-) = a^-2 - 1 - z^2 for the Hopf link with two negative crossings
CLASP_TERM = LaurentPoly2({(-2, 0): 1, (0, 0): -1, (0, 2): -1})


def twist_knot_braid(n: int) -> BraidWord:
    """
    Braid presentation of K_n on n + 2 strands

    K_0 is the empty word, K_1 is 1 -2 1 -2, and K_n prefixes the shifted
    word of K_n-1 with a clasp: switching its first crossing destabilizes to
    K_n-1, smoothing it destabilizes to the negative Hopf link.
    """
    if n < 0:
        raise DomainError(f"twist knots are indexed by n >= 0, got {n}")
    if n == 0:
        return BraidWord(1, ())
    letters = [1, -2, 1, -2]
    for _ in range(2, n + 1):
        shifted = [x + 1 if x > 0 else x - 1 for x in letters]
        letters = [1, 1, shifted[0], -1] + shifted[1:]
    return BraidWord(n + 2, tuple(letters))


@dataclasses.dataclass(frozen=True)
class FamilyInstance:
    kind: FamilyKind
    parameter: int
    braid: BraidWord

    @classmethod
    def torus(cls, m: int) -> "FamilyInstance":
        if m % 2 == 0:
            raise LinkNotKnotError(2)
        letter = 1 if m > 0 else -1
        return cls(FamilyKind.TORUS2, m, BraidWord(2, (letter,) * abs(m)))

    @classmethod
    def twist(cls, n: int) -> "FamilyInstance":
        return cls(FamilyKind.TWIST, n, twist_knot_braid(n))

    def ref(self) -> FamilyInstanceRef:
        return FamilyInstanceRef(kind=self.kind, parameter=self.parameter, braid=format_braid(self.braid))


def torus_homfly(m: int) -> LaurentPoly2:
    """HOMFLY of T(2, m), m odd, through the two-strand recursion matrix"""
    if m % 2 == 0:
        raise LinkNotKnotError(2)
    return two_strand_homfly(m)


def twist_knot_homfly(n: int) -> LaurentPoly2:
    """P(K_0) = 1 and P(K_n+1) = a^2 P(K_n) + a z P(H-)"""
    if n < 0:
        raise DomainError(f"twist knots are indexed by n >= 0, got {n}")
    value = LaurentPoly2.constant(1)
    a2 = A ** 2
    for _ in range(n):
        value = a2 * value + CLASP_TERM
    return value


def lcm_torus_exponent(n: int) -> int:
    """1 + lcm(2, 4, ..., 2n): T(2, m) for this m untwists by t_2k-moves for every k <= n"""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    return 1 + lcm(*range(2, 2 * n + 1, 2))


def untwist_witness(inst: FamilyInstance, family: MoveFamily, k: int) -> Optional[MoveSequence]:
    """
    Inverse twist moves that reduce a family presentation to the unknot

    T(2, 2n+1) under t_2k-moves reaches T(2, 1) when k | n and T(2, -1) when
    k | n+1. K_n under tbar_2k-moves loses its 2n clasp crossings when k | n.
    No witness is claimed for the other two pairings.
    """
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")

    if inst.kind is FamilyKind.TORUS2 and family is MoveFamily.T:
        if inst.parameter < 1:
            raise DomainError("witnesses untwist positive two-strand twist regions")
        n = (inst.parameter - 1) // 2
        if n % k == 0:
            count = n // k
        elif (n + 1) % k == 0:
            count = (n + 1) // k
        else:
            return None
        move = Move(family=family, k=k, direction=-1, location="two-strand twist region")
        return MoveSequence(start=inst.ref(), moves=[move] * count)

    if inst.kind is FamilyKind.TWIST and family is MoveFamily.TBAR:
        n = inst.parameter
        if n % k:
            return None
        move = Move(family=family, k=k, direction=-1, location="clasp twist region")
        return MoveSequence(start=inst.ref(), moves=[move] * (n // k))

    return None


def replay_witness(seq: MoveSequence) -> int:
    """Crossing exponent of the twist region after every move"""
    start = seq.start
    exponent = start.parameter if start.kind is FamilyKind.TORUS2 else 2 * start.parameter
    for move in seq.moves:
        exponent += move.direction * 2 * move.k
    return exponent


def witness_reaches_unknot(seq: MoveSequence) -> bool:
    exponent = replay_witness(seq)
    if seq.start.kind is FamilyKind.TORUS2:
        return exponent in (1, -1)
    return exponent == 0


def _claimed_cell(
    inst: FamilyInstance, moves: MoveFamily, n: int, k: int, expected: bool, verdict: Optional[Verdict]
) -> Prop6Cell:
    seq = untwist_witness(inst, moves, k)
    problems = []
    if (seq is not None) != expected:
        problems.append("witness disagrees with the divisor set")
    if seq is not None and not witness_reaches_unknot(seq):
        problems.append(f"witness replays to exponent {replay_witness(seq)}")
    obstructed = None
    if verdict is not None:
        obstructed = verdict.obstructed
        if obstructed and expected:
            problems.append("obstructed inside the divisor set")
        if not obstructed and not expected:
            problems.append("not obstructed outside the divisor set")
    return Prop6Cell(
        family=inst.kind,
        moves=moves,
        n=n,
        k=k,
        expected=expected,
        witness=seq is not None,
        obstructed=obstructed,
        consistent=not problems,
        detail="; ".join(problems) or None,
    )


def _excluded_cell(kind: FamilyKind, moves: MoveFamily, n: int, verdict: Verdict) -> Prop6Cell:
    return Prop6Cell(
        family=kind,
        moves=moves,
        n=n,
        k=verdict.k,
        expected=False,
        obstructed=verdict.obstructed,
        consistent=verdict.obstructed,
        detail=None if verdict.obstructed else "not obstructed although only k = 1 untwists",
    )


def _prop6_rows(n: int, k_max: int) -> Tuple[List[Prop6Cell], List[BraidIndexCell]]:
    torus = FamilyInstance.torus(2 * n + 1)
    torus_P = torus_homfly(2 * n + 1)
    torus_nabla = specialize_a(torus_P, 1, ZZ)
    twist = FamilyInstance.twist(n)
    twist_P = twist_knot_homfly(n)
    twist_nabla = specialize_a(twist_P, 1, ZZ)

    cells: List[Prop6Cell] = []
    for k in range(1, k_max + 1):
        has_tests = k >= 2
        cells.append(
            _claimed_cell(
                torus, MoveFamily.T, n, k,
                expected=n % k == 0 or (n + 1) % k == 0,
                verdict=t_test(torus_P, k) if has_tests else None,
            )
        )
        cells.append(
            _claimed_cell(
                twist, MoveFamily.TBAR, n, k,
                expected=n % k == 0,
                verdict=fused_tbar_verdict(twist_P, twist_nabla, k) if has_tests else None,
            )
        )
        if has_tests:
            cells.append(_excluded_cell(FamilyKind.TORUS2, MoveFamily.TBAR, n, fused_tbar_verdict(torus_P, torus_nabla, k)))
            cells.append(_excluded_cell(FamilyKind.TWIST, MoveFamily.T, n, t_test(twist_P, k)))

    braid_cells = []
    for k in range(3, k_max + 1):
        bound = braid_index_lb_after_twist(twist_P, k)
        braid_cells.append(BraidIndexCell(n=n, k=k, lower_bound=bound, expected=n + 2, consistent=bound == n + 2))
    return cells, braid_cells


async def verify_prop6(n_max: int, k_max: int) -> Prop6Report:
    """
    Check the divisor characterization for both families over n <= n_max, k <= k_max

    Args:
        n_max: Largest family index (torus knots T(2, 2n+1), twist knots K_n)
        k_max: Largest twist parameter

    Returns:
        Prop6Report: every cell with its counterexample detail, and the
        post-twist braid-index bound for each twist knot
    """
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    if k_max < 2:
        raise DomainError(f"k_max must be at least 2, got {k_max}")

    rows = await asyncio.gather(*(asyncio.to_thread(_prop6_rows, n, k_max) for n in range(1, n_max + 1)))
    cells = sorted(
        (cell for row, _ in rows for cell in row),
        key=lambda c: (c.family.value, c.moves.value, c.n, c.k),
    )
    braid_cells = sorted((cell for _, row in rows for cell in row), key=lambda c: (c.n, c.k))
    passed = all(c.consistent for c in cells) and all(c.consistent for c in braid_cells)
    if not passed:
        failures = [c for c in cells if not c.consistent]
        logger.warning(f"Divisor check failed in {len(failures)} cells, first: {failures[:1]}")
    logger.info(f"Divisor check n<={n_max}, k<={k_max}: {'pass' if passed else 'fail'}")
    return Prop6Report(n_max=n_max, k_max=k_max, cells=cells, braid_index=braid_cells, passed=passed)
