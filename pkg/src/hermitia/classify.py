"""Desk-scale rediscovery of the admissible signatures: for a concrete q and
degree bound, find every (d, i, j) that admits an invertible 4x4 form matrix
B with the pulled-back form vanishing identically, and check each admissible
solution space against the three expected shapes.

The classifier is a brute-force oracle for fixed q.  Working over the
algebraic closure is reduced to two exact finite computations: an invertible
witness certifies "yes", and a vanishing-determinant certificate on a
5-point-per-variable grid certifies "no" (det is a degree-4 polynomial in
the free coefficients, so per-variable degree is at most 4 and a full grid
of 5 values per variable decides identical vanishing).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dfield
from typing import Optional

from . import gf
from .matff import Mat
from .tetra import (CASE_C1, CASE_C2, CASE_C3, Signature,
                    canonical_signature, case_signature, exponent_matrix,
                    is_identically_zero)

_WITNESS_SEARCH_BITS = 24   # exhaustive witness hunt over GF(q^2)^dim up to 2^24 vectors
_GRID_DIM_LIMIT = 10        # 5^dim grid guard; never hit at desk scale


class ClassifyError(ValueError):
    pass


@dataclass
class SolutionSpace:
    """The linear space {B : pulled-back form == 0} for one signature.

    Cells of the 4x4 matrix are partitioned by equal t-exponent; singleton
    cells are forced to zero and every larger group must sum to zero, which
    leaves (group size - 1) free coefficients per group.
    """
    sig: Signature
    q: int
    field: gf.Field
    forced_zero: frozenset          # cells (l, m) that must vanish
    groups: tuple                   # tuples of cells sharing an exponent, size >= 2
    basis: list                     # 4x4 Mats spanning the space

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, B: Mat) -> bool:
        """Exact membership; works over any extension of the base field."""
        f = B.field
        if any(B.data[l][m] for (l, m) in self.forced_zero):
            return False
        for group in self.groups:
            acc = 0
            for (l, m) in group:
                acc = f.add(acc, B.data[l][m])
            if acc:
                return False
        return True

    def combination(self, coeffs, fld=None) -> Mat:
        """B with the k-th free cell of each group set from coeffs (the group
        anchor picks up minus the sum)."""
        f = fld or self.field
        data = [[0] * 4 for _ in range(4)]
        it = iter(coeffs)
        for group in self.groups:
            total = 0
            for (l, m) in group[1:]:
                c = next(it)
                data[l][m] = c
                total = f.add(total, c)
            l0, m0 = group[0]
            data[l0][m0] = f.neg(total)
        return Mat(f, data)


def solution_space(sig: Signature, q: int) -> SolutionSpace:
    E = exponent_matrix(sig, q)
    by_value = {}
    for l in range(4):
        for m in range(4):
            by_value.setdefault(E[l][m], []).append((l, m))
    forced = frozenset(cells[0] for cells in by_value.values() if len(cells) == 1)
    groups = tuple(tuple(cells) for _, cells in sorted(by_value.items())
                   if len(cells) >= 2)
    fld = gf.gfq2(q)
    basis = []
    for group in groups:
        anchor = group[0]
        for cell in group[1:]:
            data = [[0] * 4 for _ in range(4)]
            data[cell[0]][cell[1]] = 1
            data[anchor[0]][anchor[1]] = fld.neg(1)
            basis.append(Mat(fld, data))
    space = SolutionSpace(sig, q, fld, forced, groups, basis)
    assert all(is_identically_zero(sig, q, b) for b in basis)
    return space


@dataclass
class InvertibleVerdict:
    invertible: bool
    exact: bool                 # randomized negatives are never exact
    method: str
    witness: Optional[Mat] = None
    checked: int = 0


def _active_cells(space: SolutionSpace):
    return {cell for group in space.groups for cell in group}


def exists_invertible(space: SolutionSpace, strategy: str = "exhaustive",
                      trials: int = 40, ext_m: int = 4,
                      seed: int = 0) -> InvertibleVerdict:
    """Decide whether the span contains an invertible matrix over the
    algebraic closure.

    The exhaustive strategy is exact in both directions: witness search over
    GF(q^2) coefficients first, then the 5-per-variable grid over GF(q^4)
    which either produces a witness or certifies det == 0 identically.  The
    random strategy only ever certifies the positive direction.
    """
    dim = space.dim
    if dim == 0:
        return InvertibleVerdict(False, True, "empty-space")
    active = _active_cells(space)
    for l in range(4):
        if not any((l, m) in active for m in range(4)):
            return InvertibleVerdict(False, True, "zero-row")
    for m in range(4):
        if not any((l, m) in active for l in range(4)):
            return InvertibleVerdict(False, True, "zero-column")

    if strategy == "random":
        fld = gf.gf_ext(space.q, ext_m)
        rng = random.Random(seed)
        for k in range(trials):
            coeffs = [rng.randrange(fld.order) for _ in range(dim)]
            B = space.combination(coeffs, fld)
            if B.det() != 0:
                return InvertibleVerdict(True, True, "random-witness", B, k + 1)
        return InvertibleVerdict(False, False, "random-no-witness", None, trials)

    if strategy != "exhaustive":
        raise ClassifyError(f"unknown strategy {strategy!r}")

    checked = 0
    q2 = space.field.order
    if dim * (q2 - 1).bit_length() <= _WITNESS_SEARCH_BITS:
        for coeffs in itertools.product(range(q2), repeat=dim):
            checked += 1
            B = space.combination(coeffs)
            if B.det() != 0:
                return InvertibleVerdict(True, True, "witness-gfq2", B, checked)

    if dim > _GRID_DIM_LIMIT:
        raise ClassifyError(f"solution space dim {dim} beyond grid guard")
    fld4 = gf.gf_ext(space.q, 2)
    grid = list(fld4.elements())[:5]
    for coeffs in itertools.product(grid, repeat=dim):
        checked += 1
        B = space.combination(coeffs, fld4)
        if B.det() != 0:
            return InvertibleVerdict(True, True, "witness-gfq4", B, checked)
    return InvertibleVerdict(False, True, "grid-certificate", None, checked)


# ---------------------------------------------------------------------------
# the three expected shapes
# ---------------------------------------------------------------------------

def _case1_shape(fld, a11, a12, a13, a21, a22, a23):
    n = fld.neg
    return Mat(fld, [
        [0, a11, a12, a13],
        [0, a21, a22, a23],
        [n(a11), n(a12), n(a13), 0],
        [n(a21), n(a22), n(a23), 0],
    ])


def _case23_shape(fld, b1, b2, b3):
    n = fld.neg
    return Mat(fld, [
        [0, b1, 0, b2],
        [0, 0, 0, b3],
        [0, 0, n(b3), 0],
        [n(b1), n(b2), 0, 0],
    ])


def case_shape_basis(case: str, q: int, fld=None):
    """Basis matrices of the expected solution-space span for a case,
    including the extra zeros for q >= 3."""
    fld = fld or gf.gfq2(q)
    if case == CASE_C1:
        params = [(1, 0, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0), (0, 0, 0, 1, 0, 0),
                  (0, 0, 0, 0, 0, 1)]
        if q == 2:
            params += [(0, 1, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0)]
        return [_case1_shape(fld, *p) for p in params]
    params = [(1, 0, 0), (0, 0, 1)]
    if q == 2:
        params.append((0, 1, 0))
    return [_case23_shape(fld, *p) for p in params]


def case_shape_check(B: Mat, case: str, q: int) -> bool:
    """Support pattern, sign ties and side conditions of one case."""
    f = B.field
    d = B.data
    if B.rows != 4 or B.cols != 4:
        return False
    if case == CASE_C1:
        if any(d[0][0:1] + d[1][0:1]) or d[2][3] or d[3][3]:
            return False
        for col in range(3):
            if d[2][col] != f.neg(d[0][col + 1]) or d[3][col] != f.neg(d[1][col + 1]):
                return False
        if q >= 3 and (d[0][2] or d[1][2]):
            return False
        if (d[0][1], d[1][1]) == (0, 0) or (d[0][3], d[1][3]) == (0, 0):
            return False
        return Mat(f, [d[0], d[1]]).rank() == 2
    if case in (CASE_C2, CASE_C3):
        b1, b2, b3 = d[0][1], d[0][3], d[1][3]
        if b1 == 0 or b3 == 0:
            return False
        if q >= 3 and b2 != 0:
            return False
        expect = _case23_shape(f, b1, b2, b3)
        return B == expect
    raise ClassifyError(f"unknown case {case!r}")


def _conjugate_by_reversal(B: Mat) -> Mat:
    """J B J for the anti-diagonal permutation J (reverse rows and columns)."""
    return Mat(B.field, [list(reversed(row)) for row in reversed(B.data)])


def expected_cases(q: int):
    """Map canonical signature -> (roman label, case id, label signature,
    flipped?) for the families valid at this q."""
    out = {}
    for case, roman in ((CASE_C1, "I"), (CASE_C2, "II"), (CASE_C3, "III")):
        try:
            label = case_signature(case, q)
        except Exception:
            continue
        canon = canonical_signature(*label.astuple())
        out[canon] = (roman, case, label, canon != label)
    return out


def match_case_shape(space: SolutionSpace, case: str, q: int,
                     flipped: bool) -> bool:
    """The admissible space equals the expected span exactly: dimensions
    agree and every shape basis matrix lies in the space (conjugated by the
    index reversal when the canonical signature is the flipped label)."""
    shape = case_shape_basis(case, q, space.field)
    if flipped:
        shape = [_conjugate_by_reversal(b) for b in shape]
    if space.dim != len(shape):
        return False
    return all(space.contains(b) for b in shape)


@dataclass
class AdmissibleEntry:
    sig: Signature                  # canonical
    case_sig: Optional[Signature]   # conventional label, when a case matched
    dim: int
    case: str                       # "I" | "II" | "III" | "unexpected"
    witness: Mat

    def to_json(self) -> dict:
        out = {"sig": list(self.sig.astuple()), "dim": self.dim,
               "case": self.case, "witness": self.witness.to_json()}
        out["case_sig"] = list(self.case_sig.astuple()) if self.case_sig else None
        return out


@dataclass
class ClassificationReport:
    q: int
    d_max: int
    admissible: list                # AdmissibleEntry, sorted by signature
    stats: dict = dfield(default_factory=dict)

    def signatures(self):
        return [e.sig for e in self.admissible]

    def case_signatures(self):
        return [e.case_sig or e.sig for e in self.admissible]

    @property
    def matches_prediction(self) -> bool:
        if any(e.case == "unexpected" for e in self.admissible):
            return False
        predicted = {s for s, _ in _predicted_with_case(self.q, self.d_max)}
        return set(self.signatures()) == predicted

    def to_json(self) -> dict:
        return {"q": self.q, "d_max": self.d_max,
                "admissible": [e.to_json() for e in self.admissible],
                "matches_prediction": self.matches_prediction,
                "stats": self.stats}


def _predicted_with_case(q: int, d_max: int):
    out = []
    for canon, (roman, case, label, _) in expected_cases(q).items():
        if label.d <= d_max:
            out.append((canon, roman))
    return out


def predicted_signatures(q: int, d_max: int):
    """Canonical signatures the admissible set is expected to equal."""
    return sorted(s for s, _ in _predicted_with_case(q, d_max))


def default_d_max(q: int) -> int:
    # comfortably past the largest expected signature degree
    return (3 * (q + 1) * q + 1) // 2


def canonical_signatures_upto(d_max: int):
    for d in range(3, d_max + 1):
        for i in range(1, d - 1):
            for j in range(i + 1, d):
                sig = Signature(d, i, j)
                if canonical_signature(d, i, j) == sig:
                    yield sig


def enumerate_admissible(q: int, d_max: Optional[int] = None,
                         threads: int = 1) -> ClassificationReport:
    """Scan every canonical signature with d <= d_max, keep those whose
    solution space contains an invertible element, and pattern-match each
    admissible space against the expected shapes."""
    if not gf.is_prime_power(q):
        raise ClassifyError(f"q={q} is not a prime power")
    if d_max is None:
        d_max = default_d_max(q)
    if d_max < 3:
        raise ClassifyError("d_max must be at least 3")
    expected = expected_cases(q)

    def probe(sig):
        space = solution_space(sig, q)
        verdict = exists_invertible(space)
        if not verdict.invertible:
            return None
        if sig in expected:
            roman, case, label, flipped = expected[sig]
            if match_case_shape(space, case, q, flipped):
                return AdmissibleEntry(sig, label, space.dim, roman,
                                       verdict.witness)
        return AdmissibleEntry(sig, None, space.dim, "unexpected",
                               verdict.witness)

    sigs = list(canonical_signatures_upto(d_max))
    results = _run_parallel(probe, sigs, threads)
    admissible = sorted((e for e in results if e), key=lambda e: e.sig)
    stats = {"signatures_scanned": len(sigs), "admissible": len(admissible)}
    return ClassificationReport(q, d_max, admissible, stats)


def _run_parallel(fn, items, threads):
    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]
