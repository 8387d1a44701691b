"""Bigraded spectral-sequence pages, the Bockstein engine, and the
Eilenberg-MacLane chart generator.

Pages live over F_p and are stored as finitely supported tables
(s, t) -> dimension.  The default differential convention is Adams-style,
d_r : (s, t) -> (s + r, t + r - 1), i.e. one column to the left and r up
when charts are drawn with x = t - s, y = s.  Engines that need another
bidegree (the Bockstein runs in a single column with d_r of bidegree
(0, -1)) say so explicitly on their DifferentialData.
"""

from dataclasses import dataclass, field

from .errors import CheckFailed, InputError
from .linalg import (PrimeField, integer_rank, is_zero_matrix, mat_mul,
                     mat_mul_int, rank, shape, snf_divisors)
from .steenrod import validate_prime

# ---------------------------------------------------------------------------
# Page and differential containers.
# ---------------------------------------------------------------------------


@dataclass
class BigradedPage:
    """One page of a spectral sequence: r plus a table (s, t) -> dim."""

    r: int
    dims: dict
    labels: dict = field(default_factory=dict)

    def dim(self, spot):
        return self.dims.get(tuple(spot), 0)

    def spots(self):
        return sorted(k for k, v in self.dims.items() if v > 0)

    def total_in_column(self, column):
        return sum(v for (s, t), v in self.dims.items() if t - s == column)

    def copy(self, r=None):
        return BigradedPage(self.r if r is None else r, dict(self.dims), dict(self.labels))


@dataclass
class DifferentialData:
    """The d_r family on one page: matrices indexed by source spot.

    The matrix at (s, t) maps that spot to (s, t) + bidegree, stored with
    target-dimension rows and source-dimension columns.  Entries live in
    F_p, or in the explicitly supplied field (the totalization engine also
    runs over Q, with p recorded as 0).
    """

    r: int
    p: int
    matrices: dict
    bidegree: tuple = None
    field: object = None

    def __post_init__(self):
        if self.bidegree is None:
            self.bidegree = (self.r, self.r - 1)
        if self.field is None:
            self.field = PrimeField(self.p)

    def target(self, spot):
        return (spot[0] + self.bidegree[0], spot[1] + self.bidegree[1])

    def source_of(self, spot):
        return (spot[0] - self.bidegree[0], spot[1] - self.bidegree[1])

    def is_nonzero_at(self, spot):
        m = self.matrices.get(tuple(spot))
        return m is not None and any(
            self.field.of(x) != self.field.zero for row in m for x in row)


@dataclass
class SpectralSequence:
    """Pages r = first..r_max with differentials, plus the E_infinity page.

    provenance is one of "bockstein", "uass-em", "ext", "custom".
    """

    p: int
    provenance: str
    pages: list  # list of (BigradedPage, DifferentialData)
    infinity: BigradedPage
    annotations: dict = field(default_factory=dict)

    def page(self, r):
        for pg, _ in self.pages:
            if pg.r == r:
                return pg
        raise InputError(f"page E_{r} is not stored (have r = "
                         f"{[pg.r for pg, _ in self.pages]} and infinity)")

    def differentials(self, r):
        for pg, diff in self.pages:
            if pg.r == r:
                return diff
        raise InputError(f"page E_{r} is not stored")


def _check_shapes(page, diff):
    for spot, mat in diff.matrices.items():
        tgt = diff.target(spot)
        nrows, ncols = shape(mat)
        if ncols != page.dim(spot) or (mat and nrows != page.dim(tgt)):
            raise InputError(
                f"differential at {spot} has shape {nrows}x{ncols}, page has "
                f"dim {page.dim(spot)} there and {page.dim(tgt)} at {tgt}")
        if not mat and page.dim(tgt) != 0:
            raise InputError(f"differential at {spot} has 0 rows but target {tgt} "
                             f"has dim {page.dim(tgt)}")


def _check_dd_zero(field_p, diff):
    for spot, mat in diff.matrices.items():
        nxt = diff.matrices.get(diff.target(spot))
        if nxt is not None and mat and nxt:
            if not is_zero_matrix(field_p, mat_mul(field_p, nxt, mat)):
                raise InputError(f"d o d != 0 at {spot}")


def _unit_paired(mat):
    # at most one nonzero entry per row and per column
    cols_hit = set()
    rows_hit = set()
    for i, row in enumerate(mat):
        for j, x in enumerate(row):
            if x:
                if i in rows_hit or j in cols_hit:
                    return None
                rows_hit.add(i)
                cols_hit.add(j)
    return rows_hit, cols_hit


def turn_page(page, diff):
    """Homology bookkeeping: the next page of (page, diff).

    At each spot dim drops by rank(outgoing) + rank(incoming).  Labels are
    propagated only when both adjacent matrices pair off distinct basis
    vectors (one nonzero entry per row/column); otherwise they are dropped.
    """
    fp = diff.field
    _check_shapes(page, diff)
    _check_dd_zero(fp, diff)
    new_dims = {}
    new_labels = {}
    for spot in set(page.dims) | {diff.target(s) for s in diff.matrices}:
        d = page.dim(spot)
        out = diff.matrices.get(spot)
        inc = diff.matrices.get(diff.source_of(spot))
        r_out = rank(fp, out) if out else 0
        r_in = rank(fp, inc) if inc else 0
        nd = d - r_out - r_in
        if nd < 0:
            raise CheckFailed(f"negative dimension at {spot}: {d} - {r_out} - {r_in}")
        if nd:
            new_dims[spot] = nd
        labels = page.labels.get(spot)
        if labels is not None and nd:
            out_pair = _unit_paired(out) if out else (set(), set())
            in_pair = _unit_paired(inc) if inc else (set(), set())
            if out_pair is not None and in_pair is not None:
                dead = out_pair[1] | in_pair[0]
                kept = tuple(l for i, l in enumerate(labels) if i not in dead)
                if len(kept) == nd:
                    new_labels[spot] = kept
    return BigradedPage(page.r + 1, new_dims, new_labels)


def from_single_page(page, p, provenance, annotations=None):
    """A collapsed spectral sequence: the page is already E_infinity."""
    empty = DifferentialData(page.r, p, {})
    return SpectralSequence(p, provenance, [(page, empty)],
                            page.copy(), annotations or {})


# ---------------------------------------------------------------------------
# Graded abelian groups and integral chain complexes.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedAbelianGroup:
    """Finitely many cyclic summands per degree: 0 encodes Z, m >= 2 a Z/m."""

    summands: tuple  # tuple of (degree, m) pairs, sorted

    @classmethod
    def from_dict(cls, table):
        items = []
        for deg, ms in table.items():
            for m in ms:
                if m != 0 and m < 2:
                    raise InputError(f"cyclic order {m} must be 0 (=Z) or >= 2")
                items.append((int(deg), int(m)))
        return cls(tuple(sorted(items)))

    @classmethod
    def from_json(cls, doc):
        table = {}
        for deg, names in doc.items():
            table[int(deg)] = [parse_summand(s) for s in names]
        return cls.from_dict(table)

    def degrees(self):
        return sorted({d for d, _ in self.summands})

    def in_degree(self, d):
        return [m for dd, m in self.summands if dd == d]

    def to_json(self):
        out = {}
        for d, m in self.summands:
            out.setdefault(str(d), []).append("Z" if m == 0 else f"Z/{m}")
        return out


def parse_summand(name):
    if name == "Z":
        return 0
    if name.startswith("Z/"):
        m = int(name[2:])
        if m < 2:
            raise InputError(f"bad torsion order in {name!r}")
        return m
    raise InputError(f"bad summand {name!r}; expected \"Z\" or \"Z/m\"")


def p_valuation(p, m):
    k = 0
    while m % p == 0:
        m //= p
        k += 1
    return k


@dataclass
class ChainComplex:
    """Free integral chain complex: ranks per degree, boundary d_m: C_m -> C_{m-1}."""

    ranks: dict
    boundaries: dict

    def validate(self):
        for m, mat in self.boundaries.items():
            nrows, ncols = shape(mat)
            if ncols != self.ranks.get(m, 0):
                raise InputError(f"boundary {m} has {ncols} columns, C_{m} has rank {self.ranks.get(m, 0)}")
            if mat and nrows != self.ranks.get(m - 1, 0):
                raise InputError(f"boundary {m} has {nrows} rows, C_{m-1} has rank {self.ranks.get(m - 1, 0)}")
        for m, mat in self.boundaries.items():
            nxt = self.boundaries.get(m + 1)
            if nxt and mat:
                prod = mat_mul_int(mat, nxt)
                if any(any(x for x in row) for row in prod):
                    raise InputError(f"not a chain complex: d_{m} d_{m+1} != 0")

    @classmethod
    def from_json(cls, doc):
        ranks = {int(k): int(v) for k, v in doc.get("ranks", {}).items()}
        boundaries = {int(k): [[int(x) for x in row] for row in v]
                      for k, v in doc.get("boundaries", {}).items()}
        c = cls(ranks, boundaries)
        c.validate()
        return c


def integral_homology(complex_):
    """H_*(C; Z) by Smith normal form, as a GradedAbelianGroup."""
    complex_.validate()
    table = {}
    degrees = set(complex_.ranks) | set(complex_.boundaries)
    for m in sorted(degrees):
        n_m = complex_.ranks.get(m, 0)
        if n_m == 0:
            continue
        d_m = complex_.boundaries.get(m, [])
        d_next = complex_.boundaries.get(m + 1, [])
        rank_m = integer_rank(d_m) if d_m else 0
        divisors = snf_divisors(d_next) if d_next else []
        rank_next = len(divisors)
        betti = n_m - rank_m - rank_next
        if betti < 0:
            raise CheckFailed("negative Betti number; input is not a complex")
        summands = [0] * betti + [d for d in divisors if d > 1]
        if summands:
            table[m] = summands
    return GradedAbelianGroup.from_dict(table)


# ---------------------------------------------------------------------------
# The Bockstein spectral sequence of a graded abelian group.
# ---------------------------------------------------------------------------


def bockstein_pages(p, group, r_max):
    """Mod-p homology Bockstein spectral sequence of H_* = group.

    E_1 in degree m is (p-rank of H_m tensor F_p) + (p-torsion count of
    H_{m-1}); a Z/p^k summand in degree m pairs the degree-(m+1) class to
    the degree-m class under d_k; E_infinity counts the Z summands.
    Pages use the single-column bigrading (0, degree) with d_r of
    bidegree (0, -1).
    """
    validate_prime(p)
    if r_max < 1:
        raise InputError("r_max must be >= 1")
    # labels: ("free", m, i), ("tor", m, i, k) bottom, ("cot", m, i, k) top
    spots = {}

    def add(spot, label):
        spots.setdefault(spot, []).append(label)

    pairs = []  # (k, top label, bottom label)
    for i, (m, size) in enumerate(group.summands):
        if size == 0:
            add((0, m), ("free", m, i))
        else:
            k = p_valuation(p, size)
            if k == 0:
                continue
            bottom = ("tor", m, i, k)
            top = ("cot", m + 1, i, k)
            add((0, m), bottom)
            add((0, m + 1), top)
            pairs.append((k, top, bottom))
    for labels in spots.values():
        labels.sort()
    page = BigradedPage(1, {s: len(ls) for s, ls in spots.items()},
                        {s: tuple(ls) for s, ls in spots.items()})
    k_top = max([k for k, _, _ in pairs], default=0)
    last = max(r_max, k_top)
    all_pages = []
    for r in range(1, last + 2):
        diff = _pair_differential(p, page, [pb for pb in pairs if pb[0] == r],
                                  bidegree=(0, -1), r=r)
        all_pages.append((page, diff))
        page = turn_page(page, diff)
    infinity = page.copy(r=page.r)
    _assert_bockstein_totals(p, group, all_pages, infinity)
    return SpectralSequence(p, "bockstein", all_pages[:r_max], infinity)


def _pair_differential(p, page, pairs, bidegree, r):
    matrices = {}
    for _, top, bottom in pairs:
        src = next((s for s, ls in page.labels.items() if top in ls), None)
        tgt = next((s for s, ls in page.labels.items() if bottom in ls), None)
        if src is None or tgt is None:
            raise CheckFailed(f"lost track of pair {top} -> {bottom}")
        if (tgt[0] - src[0], tgt[1] - src[1]) != bidegree:
            raise CheckFailed("pair does not match the differential bidegree")
        mat = matrices.setdefault(
            src, [[0] * page.dim(src) for _ in range(page.dim(tgt))])
        mat[page.labels[tgt].index(bottom)][page.labels[src].index(top)] = 1
    return DifferentialData(r, p, matrices, bidegree)


def _assert_bockstein_totals(p, group, pages, infinity):
    # dim E_1 = dim E_inf + total rank of differentials in and out, degreewise
    fp = PrimeField(p)
    degrees = {s[1] for pg, _ in pages for s in pg.dims} | {s[1] for s in infinity.dims}
    for m in degrees:
        e1 = pages[0][0].dim((0, m)) if pages else infinity.dim((0, m))
        cancelled = 0
        for pg, diff in pages:
            for spot, mat in diff.matrices.items():
                rk = rank(fp, mat) if mat else 0
                if spot == (0, m) or diff.target(spot) == (0, m):
                    cancelled += rk
        if e1 != infinity.dim((0, m)) + cancelled:
            raise CheckFailed(f"Bockstein bookkeeping failed in degree {m}")


def bockstein_from_chain_complex(p, complex_):
    """Bockstein spectral sequence of a free integral chain complex.

    Reduces to bockstein_pages after computing H_*(C; Z) by Smith normal
    form; rejects matrices that do not form a complex.
    """
    group = integral_homology(complex_)
    k_top = max([p_valuation(p, m) for _, m in group.summands if m], default=1)
    return bockstein_pages(p, group, max(1, k_top))


# ---------------------------------------------------------------------------
# Eilenberg-MacLane chart generator (the figures' forced patterns).
# ---------------------------------------------------------------------------


def parse_homotopy_entry(p, degree, name):
    if degree < 1:
        raise InputError(f"homotopy degrees must be >= 1, got {degree}")
    m = parse_summand(name)
    if m == 0:
        return (degree, 0, 0)
    k = p_valuation(p, m)
    if p**k != m:
        raise InputError(
            f"unsupported summand {name!r} in degree {degree}: only Z and "
            f"Z/p^k torsion at p = {p} is handled")
    if k == 1:
        raise InputError(
            f"unsupported summand {name!r} in degree {degree}: first-order "
            "torsion Z/p is not determined by the implemented chart rules; "
            "only Z and Z/p^k with k >= 2 are supported")
    return (degree, p, k)


def uass_em_chart(p, homotopy, s_max, r_max):
    """E_2 chart with forced differentials for a product of EM spaces.

    homotopy lists (degree n, summand) pairs where the summand is "Z" or
    "Z/p^k", k >= 2.  A Z in degree n contributes an infinite tower in
    column n with no differentials.  A Z/p^k in degree n contributes full
    towers in columns n and n+1 and the d_k family
    (s, s+n+1) -> (s+k, s+k+n); its column-n tower survives exactly in
    filtrations 0 <= s < k.  The torsion target column is padded k steps
    past s_max so every in-window source has its target spot stored.
    """
    validate_prime(p)
    if s_max < 0 or r_max < 2:
        raise InputError("need s_max >= 0 and r_max >= 2")
    entries = [parse_homotopy_entry(p, n, g) if isinstance(g, str) else (n, *g)
               for n, g in homotopy]
    spots = {}

    def add(spot, label):
        spots.setdefault(spot, []).append(label)

    pairs = []
    annotations = {"extensions": {}}
    for i, (n, q, k) in enumerate(entries):
        if q == 0:
            for s in range(s_max + 1):
                add((s, s + n), ("Z", n, i, s))
            annotations["extensions"][str(n)] = "all group extensions nontrivial"
        else:
            for s in range(s_max + k + 1):
                add((s, s + n), ("tor", n, i, s))
            for s in range(s_max + 1):
                add((s, s + n + 1), ("cot", n, i, s))
                pairs.append((k, ("cot", n, i, s), ("tor", n, i, s + k)))
    for ls in spots.values():
        ls.sort()
    page = BigradedPage(2, {s: len(ls) for s, ls in spots.items()},
                        {s: tuple(ls) for s, ls in spots.items()})
    k_top = max([k for _, _, k in entries], default=2)
    last = max(r_max, k_top)
    pages = []
    for r in range(2, last + 2):
        diff = _pair_differential_adams(p, page, [pb for pb in pairs if pb[0] == r], r)
        if r <= r_max:
            pages.append((page, diff))
        page = turn_page(page, diff)
    return SpectralSequence(p, "uass-em", pages, page, annotations)


def _pair_differential_adams(p, page, pairs, r):
    matrices = {}
    for _, top, bottom in pairs:
        src = next((s for s, ls in page.labels.items() if top in ls), None)
        tgt = next((s for s, ls in page.labels.items() if bottom in ls), None)
        if src is None or tgt is None:
            continue  # one end already died on an earlier page
        if (tgt[0] - src[0], tgt[1] - src[1]) != (r, r - 1):
            raise CheckFailed("forced pair off the Adams bidegree")
        mat = matrices.setdefault(
            src, [[0] * page.dim(src) for _ in range(page.dim(tgt))])
        mat[page.labels[tgt].index(bottom)][page.labels[src].index(top)] = 1
    return DifferentialData(r, p, matrices)


# ---------------------------------------------------------------------------
# The agreement checker between the two engines.
# ---------------------------------------------------------------------------


@dataclass
class AgreementReport:
    p: int
    r_max: int
    agree: bool
    differential_facts: list  # (degree, r, bockstein_has_dr, chart_has_dr)
    tower_facts: list  # (degree, bockstein_surv, chart_infinite_tower)

    def mismatches(self):
        out = [f for f in self.differential_facts if f[2] != f[3]]
        out += [f for f in self.tower_facts if f[1] != f[2]]
        return out

    def to_json(self):
        return {
            "prime": self.p,
            "pages_checked": self.r_max,
            "agree": self.agree,
            "differentials": [
                {"degree": d, "r": r, "bockstein": a, "chart": b}
                for d, r, a, b in self.differential_facts
            ],
            "towers": [
                {"degree": d, "bockstein_survives": a, "chart_tower_infinite": b}
                for d, a, b in self.tower_facts
            ],
        }


def _validate_supported_group(p, group):
    for m, size in group.summands:
        if m < 1:
            raise InputError("supported groups live in degrees >= 1")
        if size != 0:
            k = p_valuation(p, size)
            if p**k != size or k < 2:
                raise InputError(
                    f"summand Z/{size} in degree {m} is outside the supported "
                    f"class (Z and Z/p^k with k >= 2 at p = {p})")


def compare_bockstein_uass(p, group, r_max):
    """Check that the Bockstein pages and the EM chart force each other.

    For every degree m and page 2 <= r <= r_max: the Bockstein d_r out of
    degree m+1 is nonzero iff the chart has a nonzero d_r family from
    column m+1 to column m; and the Bockstein survivors in degree m are
    nonzero iff chart column m supports an infinite tower.
    """
    _validate_supported_group(p, group)
    if r_max < 2:
        raise InputError("r_max must be >= 2")
    bss = bockstein_pages(p, group, r_max)
    homotopy = [(m, "Z" if size == 0 else f"Z/{size}")
                for m, size in group.summands]
    s_max = r_max + 1  # tall enough to tell finite towers from infinite ones
    chart = uass_em_chart(p, homotopy, s_max, r_max)
    degrees = sorted({m for m, _ in group.summands} | {m + 1 for m, _ in group.summands})
    diff_facts = []
    for m in degrees:
        for r in range(2, r_max + 1):
            b_has = bss.differentials(r).is_nonzero_at((0, m + 1))
            c_diff = chart.differentials(r)
            c_has = any(c_diff.is_nonzero_at(spot)
                        for spot in c_diff.matrices
                        if spot[1] - spot[0] == m + 1)
            diff_facts.append((m + 1, r, b_has, c_has))
    tower_facts = []
    for m in degrees:
        b_surv = bss.infinity.dim((0, m)) > 0
        c_inf = chart.infinity.dim((s_max, s_max + m)) > 0
        tower_facts.append((m, b_surv, c_inf))
    report = AgreementReport(p, r_max, True, diff_facts, tower_facts)
    report.agree = not report.mismatches()
    return report
