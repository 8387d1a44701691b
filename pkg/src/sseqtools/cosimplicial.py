"""Finite cosimplicial and bicosimplicial calculators.

Covers conormalization (the cochain complex N^s = intersection of the
codegeneracy kernels with the alternating coface sum as differential),
cohomotopy, the pi^0 equalizer, diagonals, the totalization spectral
sequence of a first-quadrant double complex, and the finite-set lemma
identifying pi^0 of a diagonal with an iterated equalizer.

Every constructed (bi)cosimplicial object is validated against the full
set of cosimplicial identities; construction fails loudly otherwise.
Valid random instances are produced only through identity-preserving
constructors (constants, external products, inverse Dold-Kan images),
never by rejection sampling of raw matrices.

Truncations are explicit: an object with levels 0..N has trustworthy
cohomology only in degrees <= N-1, and operations refuse to report
beyond that.
"""

from dataclasses import dataclass, field as dataclass_field
from itertools import combinations

from .errors import CheckFailed, InputError
from .linalg import (QQ, PrimeField, identity, is_zero_matrix, mat_mul,
                     nullspace, rank, rref, shape, solve, transpose, zeros)
from .specseq import BigradedPage, DifferentialData, SpectralSequence, turn_page


# ---------------------------------------------------------------------------
# Cochain complexes (the Dold-Kan side of the dictionary).
# ---------------------------------------------------------------------------


@dataclass
class CochainComplex:
    """V^0 -> V^1 -> ... with d[i]: level i -> i+1 and d o d = 0."""

    field: object
    dims: list
    d: list

    def validate(self):
        if len(self.d) != max(len(self.dims) - 1, 0):
            raise InputError("need exactly one differential per adjacent pair")
        for i, mat in enumerate(self.d):
            if not _shape_ok(mat, self.dims[i + 1], self.dims[i]):
                raise InputError(f"differential {i} has shape {shape(mat)}, "
                                 f"wanted {self.dims[i + 1]}x{self.dims[i]}")
        for i in range(len(self.d) - 1):
            if self.d[i] and self.d[i + 1]:
                if not is_zero_matrix(self.field, mat_mul(self.field, self.d[i + 1], self.d[i])):
                    raise InputError(f"d o d != 0 at level {i}")
        return self

    def top(self):
        return len(self.dims) - 1

    def cohomology(self, s):
        if s < 0 or s > self.top():
            raise InputError(f"degree {s} out of range")
        d_out = self.d[s] if s < self.top() else []
        r_out = rank(self.field, d_out) if d_out else 0
        d_in = self.d[s - 1] if s >= 1 else []
        r_in = rank(self.field, d_in) if d_in else 0
        return self.dims[s] - r_out - r_in


# ---------------------------------------------------------------------------
# Cosimplicial vector spaces.
# ---------------------------------------------------------------------------


def _shape_ok(mat, nrows, ncols):
    # zero-row maps are stored as [], so columns are only checkable on rows
    if len(mat) != nrows:
        return False
    return not mat or all(len(row) == ncols for row in mat)


@dataclass
class CosimplicialVectorSpace:
    """Levels 0..N with cofaces d[s][i] (0 <= i <= s+1) and
    codegeneracies s_[s][i] (0 <= i <= s-1)."""

    field: object
    dims: list
    d: dict
    s_: dict

    @property
    def N(self):
        return len(self.dims) - 1

    def validate(self):
        N = self.N
        for s in range(N):
            if len(self.d.get(s, [])) != s + 2:
                raise InputError(f"level {s} needs {s + 2} cofaces")
            for i, mat in enumerate(self.d[s]):
                if not _shape_ok(mat, self.dims[s + 1], self.dims[s]):
                    raise InputError(f"coface d^{i} at level {s} has bad shape")
        for s in range(1, N + 1):
            if len(self.s_.get(s, [])) != s:
                raise InputError(f"level {s} needs {s} codegeneracies")
            for i, mat in enumerate(self.s_[s]):
                if not _shape_ok(mat, self.dims[s - 1], self.dims[s]):
                    raise InputError(f"codegeneracy s^{i} at level {s} has bad shape")
        self._check_identities()
        return self

    def _mat(self, kind, s, i):
        return (self.d if kind == "d" else self.s_)[s][i]

    def _check_identities(self):
        F = self.field
        N = self.N

        def mm(a, b):
            if not a or not b:
                return []
            return mat_mul(F, a, b)

        def eq(a, b):
            za = is_zero_matrix(F, a) if a else True
            zb = is_zero_matrix(F, b) if b else True
            if za and zb:
                return True
            return a == b

        for s in range(N - 1):
            for i in range(s + 2):
                for j in range(i + 1, s + 3):
                    lhs = mm(self.d[s + 1][j], self.d[s][i])
                    rhs = mm(self.d[s + 1][i], self.d[s][j - 1])
                    if not eq(lhs, rhs):
                        raise InputError(f"coface identity fails: d^{j} d^{i} at level {s}")
        for s in range(2, N + 1):
            for i in range(s):
                for j in range(i, s - 1):
                    lhs = mm(self.s_[s - 1][j], self.s_[s][i])
                    rhs = mm(self.s_[s - 1][i], self.s_[s][j + 1])
                    if not eq(lhs, rhs):
                        raise InputError(f"codegeneracy identity fails at level {s}")
        for s in range(N):
            for j in range(s + 1):
                for i in range(s + 2):
                    lhs = mm(self.s_[s + 1][j], self.d[s][i])
                    if i == j or i == j + 1:
                        rhs = identity(self.dims[s], F)
                    elif i < j:
                        rhs = mm(self.d[s - 1][i], self.s_[s][j - 1]) if s >= 1 else []
                    else:
                        rhs = mm(self.d[s - 1][i - 1], self.s_[s][j]) if s >= 1 else []
                    if not eq(lhs, rhs):
                        raise InputError(
                            f"mixed identity fails: s^{j} d^{i} at level {s}")


def constant_cosimplicial(field, dim, N):
    """The constant object on F^dim: all structure maps are identities."""
    eye = identity(dim, field)
    c = CosimplicialVectorSpace(
        field, [dim] * (N + 1),
        {s: [eye for _ in range(s + 2)] for s in range(N)},
        {s: [eye for _ in range(s)] for s in range(1, N + 1)})
    return c.validate()


def conormalize(C):
    """Dold-Kan conormalization: N^s = cap ker(s^i), d = sum (-1)^i d^i.

    Levels 0..N give a cochain complex whose degrees <= N-1 are
    trustworthy; the level-N group is included but has no outgoing
    differential, so H^N of the truncation is not reported.
    """
    F = C.field
    N = C.N
    bases = []  # bases[s]: list of column vectors spanning N^s
    for s in range(N + 1):
        if s == 0:
            bases.append([[F.one if i == j else F.zero for j in range(C.dims[0])]
                          for i in range(C.dims[0])])
            continue
        stacked = []
        for i in range(s):
            stacked.extend(C.s_[s][i])
        if stacked:
            kernel = nullspace(F, stacked, ncols=C.dims[s])
        else:
            kernel = [[F.one if i == j else F.zero for j in range(C.dims[s])]
                      for i in range(C.dims[s])]
        bases.append(kernel)
    diffs = []
    for s in range(N):
        alt = zeros(C.dims[s + 1], C.dims[s], F)
        sign = F.one
        for i in range(s + 2):
            mat = C.d[s][i]
            for a in range(C.dims[s + 1]):
                for b in range(C.dims[s]):
                    alt[a][b] = F.add(alt[a][b], F.mul(sign, mat[a][b]))
            sign = F.neg(sign)
        # restrict to N^s and express in the basis of N^{s+1}
        cols = []
        tgt = transpose(bases[s + 1], ncols=C.dims[s + 1]) if bases[s + 1] else []
        for v in bases[s]:
            image = [sum_entries(F, alt, v, a) for a in range(C.dims[s + 1])]
            if bases[s + 1]:
                coords = solve(F, tgt, image)
                if coords is None:
                    raise CheckFailed("conormalized differential left the subspace")
            else:
                if any(x != F.zero for x in image):
                    raise CheckFailed("conormalized differential left the subspace")
                coords = []
            cols.append(coords)
        diffs.append(transpose(cols, ncols=len(bases[s + 1])) if cols else
                     [[] for _ in range(len(bases[s + 1]))])
    complex_ = CochainComplex(F, [len(b) for b in bases], diffs)
    return complex_.validate()


def sum_entries(F, mat, v, row):
    acc = F.zero
    for b, x in enumerate(v):
        if x != F.zero:
            acc = F.add(acc, F.mul(mat[row][b], x))
    return acc


def cohomotopy(C, s):
    """dim H^s of the conormalization; s must be <= N-1."""
    if s < 0 or s > C.N - 1:
        raise InputError(f"cohomotopy degree {s} is outside the trustworthy "
                         f"range 0..{C.N - 1} of this truncation")
    return conormalize(C).cohomology(s)


def equalizer(field, a, b, ncols):
    """Basis of {x : a x = b x}."""
    diff = [[field.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    return nullspace(field, diff, ncols=ncols)


def pi0_equalizer(C):
    """{x at level 0 : d^0 x = d^1 x}, as a basis; equals H^0 (asserted)."""
    basis = equalizer(C.field, C.d[0][0], C.d[0][1], C.dims[0])
    if C.N >= 1 and len(basis) != cohomotopy(C, 0):
        raise CheckFailed("pi^0 equalizer disagrees with H^0 of the conormalization")
    return basis


# ---------------------------------------------------------------------------
# Inverse Dold-Kan: the cosimplicial object of a cochain complex.
# ---------------------------------------------------------------------------


def monotone_surjections(n, k):
    """All order-preserving surjections [n] ->> [k], as value tuples."""
    if k > n or k < 0:
        return []
    out = []
    for jumps in combinations(range(n), k):
        vals = [0] * (n + 1)
        v = 0
        for i in range(1, n + 1):
            if i - 1 in jumps:
                v += 1
            vals[i] = v
        out.append(tuple(vals))
    return sorted(out)


def _epi_mono_factor(values, k):
    """Factor a monotone map [m] -> [k] (given by values) as epi then mono.

    Returns (epi_values, image_tuple); the mono is the inclusion of the
    image.
    """
    image = sorted(set(values))
    index = {v: i for i, v in enumerate(image)}
    return tuple(index[v] for v in values), tuple(image)


def _structure_matrix(field, complex_, src_levels, tgt_levels, theta_values, k_to):
    """Block matrix of Gamma(V)(theta) for theta: [m] -> [n].

    src_levels / tgt_levels pair each summand surjection with its level in
    the complex; theta_values lists theta(0..m); k_to is n.
    """
    dims = complex_.dims
    src_dim = sum(dims[k] for _, k in src_levels)
    tgt_dim = sum(dims[k] for _, k in tgt_levels)
    mat = zeros(tgt_dim, src_dim, field)
    src_offsets = _offsets(src_levels, dims)
    tgt_offsets = _offsets(tgt_levels, dims)
    for (sigma, k), t_off in zip(tgt_levels, tgt_offsets):
        composite = tuple(sigma[v] for v in theta_values)
        epi, image = _epi_mono_factor(composite, k)
        block = None
        level_from = len(image) - 1
        if image == tuple(range(k + 1)):
            block = identity(dims[k], field)
        elif image == tuple(range(k)) and k >= 1:
            block = complex_.d[k - 1]
        # any other mono acts by zero on a complex seen as a functor
        for (tau, r), s_off in zip(src_levels, src_offsets):
            if tau == epi and r == level_from and block is not None:
                for a in range(dims[k]):
                    for b in range(dims[r]):
                        mat[t_off + a][s_off + b] = block[a][b]
    return mat


def _offsets(levels, dims):
    out = []
    acc = 0
    for _, k in levels:
        out.append(acc)
        acc += dims[k]
    return out


def from_cochain_complex(complex_, levels=None):
    """Inverse Dold-Kan: a cosimplicial object conormalizing back to the
    input.  Levels default to top+1 so every input degree is trustworthy.
    """
    complex_.validate()
    L = complex_.top()
    N = levels if levels is not None else L + 1
    summands = {n: [(sigma, k) for k in range(0, min(n, L) + 1)
                    for sigma in monotone_surjections(n, k)]
                for n in range(N + 1)}
    dims = [sum(complex_.dims[k] for _, k in summands[n]) for n in range(N + 1)]
    d = {}
    s_ = {}
    for n in range(N):
        d[n] = []
        for i in range(n + 2):
            theta = tuple(v if v < i else v + 1 for v in range(n + 1))
            d[n].append(_structure_matrix(
                complex_.field, complex_, summands[n], summands[n + 1], theta, n + 1))
    for n in range(1, N + 1):
        s_[n] = []
        for i in range(n):
            theta = tuple(v if v <= i else v - 1 for v in range(n + 1))
            s_[n].append(_structure_matrix(
                complex_.field, complex_, summands[n], summands[n - 1], theta, n - 1))
    return CosimplicialVectorSpace(complex_.field, dims, d, s_).validate()


# ---------------------------------------------------------------------------
# Bicosimplicial vector spaces.
# ---------------------------------------------------------------------------


@dataclass
class BicosimplicialVectorSpace:
    """Bigraded levels (s, t) <= (N, N) with commuting horizontal and
    vertical cosimplicial structures."""

    field: object
    dims: dict  # (s, t) -> dimension
    dh: dict    # (s, t) -> [matrix to (s+1, t)], one per coface index
    dv: dict    # (s, t) -> [matrix to (s, t+1)]
    sh: dict    # (s, t) -> [matrix to (s-1, t)]
    sv: dict    # (s, t) -> [matrix to (s, t-1)]
    N: int = 0

    def row(self, t):
        """The horizontal cosimplicial object at fixed vertical level t."""
        return CosimplicialVectorSpace(
            self.field, [self.dims[(s, t)] for s in range(self.N + 1)],
            {s: self.dh[(s, t)] for s in range(self.N)},
            {s: self.sh[(s, t)] for s in range(1, self.N + 1)})

    def column(self, s):
        return CosimplicialVectorSpace(
            self.field, [self.dims[(s, t)] for t in range(self.N + 1)],
            {t: self.dv[(s, t)] for t in range(self.N)},
            {t: self.sv[(s, t)] for t in range(1, self.N + 1)})

    def validate(self):
        for t in range(self.N + 1):
            self.row(t).validate()
        for s in range(self.N + 1):
            self.column(s).validate()
        self._check_commutation()
        return self

    def _check_commutation(self):
        F = self.field

        def mm(a, b):
            return mat_mul(F, a, b) if a and b else []

        def eq(a, b):
            za = is_zero_matrix(F, a) if a else True
            zb = is_zero_matrix(F, b) if b else True
            return (za and zb) or a == b

        for s in range(self.N + 1):
            for t in range(self.N + 1):
                for i, h_mat in enumerate(self.dh.get((s, t), []) if s < self.N else []):
                    for j, v_mat in enumerate(self.dv.get((s, t), []) if t < self.N else []):
                        lhs = mm(self.dv[(s + 1, t)][j], h_mat)
                        rhs = mm(self.dh[(s, t + 1)][i], v_mat)
                        if not eq(lhs, rhs):
                            raise InputError(f"dh/dv do not commute at {(s, t)}")
                if s < self.N and t >= 1:
                    for i, h_mat in enumerate(self.dh[(s, t)]):
                        for j, v_mat in enumerate(self.sv[(s, t)]):
                            lhs = mm(self.sv[(s + 1, t)][j], h_mat)
                            rhs = mm(self.dh[(s, t - 1)][i], v_mat)
                            if not eq(lhs, rhs):
                                raise InputError(f"dh/sv do not commute at {(s, t)}")
                if s >= 1 and t < self.N:
                    for i, h_mat in enumerate(self.sh[(s, t)]):
                        for j, v_mat in enumerate(self.dv[(s, t)]):
                            lhs = mm(self.dv[(s - 1, t)][j], h_mat)
                            rhs = mm(self.sh[(s, t + 1)][i], v_mat)
                            if not eq(lhs, rhs):
                                raise InputError(f"sh/dv do not commute at {(s, t)}")
                if s >= 1 and t >= 1:
                    for i, h_mat in enumerate(self.sh[(s, t)]):
                        for j, v_mat in enumerate(self.sv[(s, t)]):
                            lhs = mm(self.sv[(s - 1, t)][j], h_mat)
                            rhs = mm(self.sh[(s, t - 1)][i], v_mat)
                            if not eq(lhs, rhs):
                                raise InputError(f"sh/sv do not commute at {(s, t)}")


def kron(field, a, b, b_rows, b_cols):
    """Kronecker product with explicit b-shape for degenerate b."""
    a_rows, a_cols = shape(a)
    out = zeros(a_rows * b_rows, a_cols * b_cols, field)
    for i in range(a_rows):
        for j in range(a_cols):
            c = a[i][j]
            if c == field.zero:
                continue
            for k in range(b_rows):
                for l in range(b_cols):
                    out[i * b_rows + k][j * b_cols + l] = field.mul(c, b[k][l])
    return out


def external_product(C, D):
    """B^{s,t} = C^s tensor D^t with the product structure maps."""
    if C.field != D.field:
        raise InputError("mixed fields")
    F = C.field
    N = min(C.N, D.N)
    dims = {(s, t): C.dims[s] * D.dims[t] for s in range(N + 1) for t in range(N + 1)}
    dh, dv, sh, sv = {}, {}, {}, {}
    for s in range(N + 1):
        for t in range(N + 1):
            eye_d = identity(D.dims[t], F)
            eye_c = identity(C.dims[s], F)
            if s < N:
                dh[(s, t)] = [kron(F, m, eye_d, D.dims[t], D.dims[t]) for m in C.d[s]]
            if t < N:
                dv[(s, t)] = [kron(F, eye_c, m, D.dims[t + 1], D.dims[t]) for m in D.d[t]]
            if s >= 1:
                sh[(s, t)] = [kron(F, m, eye_d, D.dims[t], D.dims[t]) for m in C.s_[s]]
            if t >= 1:
                sv[(s, t)] = [kron(F, eye_c, m, D.dims[t - 1], D.dims[t]) for m in D.s_[t]]
    return BicosimplicialVectorSpace(F, dims, dh, dv, sh, sv, N).validate()


def constant_bicosimplicial(field, dim, N):
    return external_product(constant_cosimplicial(field, dim, N),
                            constant_cosimplicial(field, 1, N))


def diagonal(B):
    """The cosimplicial object s |-> B^{s,s} with d^i = d^i_h o d^i_v."""
    F = B.field
    N = B.N
    dims = [B.dims[(s, s)] for s in range(N + 1)]
    d = {}
    s_ = {}
    for s in range(N):
        d[s] = []
        for i in range(s + 2):
            v = B.dv[(s, s)][i]
            h = B.dh[(s, s + 1)][i]
            d[s].append(mat_mul(F, h, v) if h and v else
                        zeros(B.dims[(s + 1, s + 1)], B.dims[(s, s)], F))
    for s in range(1, N + 1):
        s_[s] = []
        for i in range(s):
            v = B.sv[(s, s)][i]
            h = B.sh[(s, s - 1)][i]
            s_[s].append(mat_mul(F, h, v) if h and v else
                         zeros(B.dims[(s - 1, s - 1)], B.dims[(s, s)], F))
    return CosimplicialVectorSpace(F, dims, d, s_).validate()


# ---------------------------------------------------------------------------
# Double cochain complexes and the totalization spectral sequence.
# ---------------------------------------------------------------------------


@dataclass
class DoubleCochainComplex:
    """First-quadrant bigraded spaces with commuting differentials.

    dh: (h, v) -> (h+1, v) and dv: (h, v) -> (h, v+1) with dh dh = 0,
    dv dv = 0 and dh dv = dv dh.  The sign twist d = dh + (-1)^h dv is
    applied only when totalizing.
    """

    field: object
    dims: dict
    dh: dict
    dv: dict

    def extent(self):
        hs = [h for (h, v) in self.dims]
        vs = [v for (h, v) in self.dims]
        return (max(hs, default=0), max(vs, default=0))

    def dim(self, h, v):
        return self.dims.get((h, v), 0)

    def validate(self):
        F = self.field
        H, V = self.extent()
        for (h, v), mat in self.dh.items():
            if not _shape_ok(mat, self.dim(h + 1, v), self.dim(h, v)):
                raise InputError(f"dh at {(h, v)} has bad shape")
        for (h, v), mat in self.dv.items():
            if not _shape_ok(mat, self.dim(h, v + 1), self.dim(h, v)):
                raise InputError(f"dv at {(h, v)} has bad shape")
        for h in range(H + 1):
            for v in range(V + 1):
                a = self._mat(self.dh, h + 1, v)
                b = self._mat(self.dh, h, v)
                if a and b and not is_zero_matrix(F, mat_mul(F, a, b)):
                    raise InputError(f"dh dh != 0 at {(h, v)}")
                a = self._mat(self.dv, h, v + 1)
                b = self._mat(self.dv, h, v)
                if a and b and not is_zero_matrix(F, mat_mul(F, a, b)):
                    raise InputError(f"dv dv != 0 at {(h, v)}")
                hv = self._compose(self.dv, h + 1, v, self.dh, h, v)
                vh = self._compose(self.dh, h, v + 1, self.dv, h, v)
                za = is_zero_matrix(F, hv) if hv else True
                zb = is_zero_matrix(F, vh) if vh else True
                if not ((za and zb) or hv == vh):
                    raise InputError(f"dh dv != dv dh at {(h, v)}")
        return self

    def _mat(self, table, h, v):
        return table.get((h, v), [])

    def _compose(self, outer_table, oh, ov, inner_table, ih, iv):
        outer = self._mat(outer_table, oh, ov)
        inner = self._mat(inner_table, ih, iv)
        if outer and inner:
            return mat_mul(self.field, outer, inner)
        return []


def binormalize(B):
    """Conormalize a bicosimplicial object in both directions."""
    F = B.field
    N = B.N
    bases = {}
    for s in range(N + 1):
        for t in range(N + 1):
            stacked = []
            for i in range(s):
                stacked.extend(B.sh[(s, t)][i])
            for i in range(t):
                stacked.extend(B.sv[(s, t)][i])
            if stacked:
                bases[(s, t)] = nullspace(F, stacked, ncols=B.dims[(s, t)])
            else:
                n = B.dims[(s, t)]
                bases[(s, t)] = [[F.one if i == j else F.zero for j in range(n)]
                                 for i in range(n)]
    dims = {k: len(v) for k, v in bases.items()}

    def restricted(mats, src, tgt):
        nsrc, ntgt = B.dims[src], B.dims[tgt]
        alt = zeros(ntgt, nsrc, F)
        sign = F.one
        for mat in mats:
            for a in range(ntgt):
                for b in range(nsrc):
                    alt[a][b] = F.add(alt[a][b], F.mul(sign, mat[a][b]))
            sign = F.neg(sign)
        cols = []
        tgt_basis = transpose(bases[tgt], ncols=ntgt) if bases[tgt] else []
        for vec in bases[src]:
            image = [sum_entries(F, alt, vec, a) for a in range(ntgt)]
            if bases[tgt]:
                coords = solve(F, tgt_basis, image)
                if coords is None:
                    raise CheckFailed("binormalized differential left the subspace")
            else:
                coords = []
            cols.append(coords)
        if cols:
            return transpose(cols, ncols=len(bases[tgt]))
        return [[] for _ in range(len(bases[tgt]))] if bases[tgt] else []

    dh = {}
    dv = {}
    for s in range(N):
        for t in range(N + 1):
            dh[(s, t)] = restricted(B.dh[(s, t)], (s, t), (s + 1, t))
    for s in range(N + 1):
        for t in range(N):
            dv[(s, t)] = restricted(B.dv[(s, t)], (s, t), (s, t + 1))
    return DoubleCochainComplex(F, dims, dh, dv).validate()


def total_complex(D):
    """Tot^n = sum of the antidiagonal, d = dh + (-1)^h dv."""
    F = D.field
    H, V = D.extent()
    spots = {n: [(h, n - h) for h in range(0, H + 1) if 0 <= n - h <= V]
             for n in range(H + V + 1)}
    dims = [sum(D.dim(h, v) for h, v in spots[n]) for n in range(H + V + 1)]
    offsets = {}
    for n, sp in spots.items():
        acc = 0
        for h, v in sp:
            offsets[(h, v)] = acc
            acc += D.dim(h, v)
    diffs = []
    for n in range(H + V):
        mat = zeros(dims[n + 1], dims[n], F)
        for h, v in spots[n]:
            src_off = offsets[(h, v)]
            dh = D.dh.get((h, v), [])
            if dh and (h + 1, v) in offsets:
                t_off = offsets[(h + 1, v)]
                for a in range(D.dim(h + 1, v)):
                    for b in range(D.dim(h, v)):
                        mat[t_off + a][src_off + b] = dh[a][b]
            dv = D.dv.get((h, v), [])
            if dv and (h, v + 1) in offsets:
                t_off = offsets[(h, v + 1)]
                sign = F.one if h % 2 == 0 else F.neg(F.one)
                for a in range(D.dim(h, v + 1)):
                    for b in range(D.dim(h, v)):
                        mat[t_off + a][src_off + b] = F.mul(sign, dv[a][b])
        diffs.append(mat)
    return CochainComplex(F, dims, diffs).validate(), spots, offsets



def totalization_ss(D):
    """Column-filtration spectral sequence of a first-quadrant double complex.

    E_1 is the vertical cohomology, E_2 the horizontal cohomology of that,
    converging to the cohomology of the total complex; the E_infinity
    antidiagonal totals are asserted against it during construction.
    Spots are (column h, row v) and d_r has bidegree (r, 1 - r).

    Internally E_r^{h,v} = Z_r / (Z_{r-1}^{h+1,v-1} + d Z_{r-1}^{h-r+1,v+r-2})
    with Z_r^{h,v} = {x in columns >= h of Tot^{h+v} : dx in columns >= h+r},
    all computed as honest subquotients with chosen bases, and the direct
    dims are cross-checked against turn_page rank bookkeeping.
    """
    D.validate()
    F = D.field
    H, V = D.extent()
    tot, spots, offsets = total_complex(D)
    n_top = H + V

    col_of = {}  # (n, coordinate index) -> column
    for n, sp in spots.items():
        for h, v in sp:
            for j in range(D.dim(h, v)):
                col_of[(n, offsets[(h, v)] + j)] = h

    z_cache = {}

    def z_basis(r, h, n):
        """Basis of {x in columns >= h of Tot^n : dx in columns >= h+r}.

        h may run negative (the filtration is exhausted at 0) and n out of
        range (the zero space).
        """
        key = (r, h, n)
        if key in z_cache:
            return z_cache[key]
        if n < 0 or n > n_top or tot.dims[n] == 0:
            z_cache[key] = []
            return []
        dim_n = tot.dims[n]
        rows = []
        for idx in range(dim_n):
            if col_of[(n, idx)] < h:
                rows.append([F.one if j == idx else F.zero for j in range(dim_n)])
        if n < n_top:
            d_mat = tot.d[n]
            for idx in range(tot.dims[n + 1]):
                if col_of[(n + 1, idx)] < h + r:
                    rows.append(d_mat[idx])
        if rows:
            basis = nullspace(F, rows, ncols=dim_n)
        else:
            basis = [[F.one if i == j else F.zero for j in range(dim_n)]
                     for i in range(dim_n)]
        z_cache[key] = basis
        return basis

    def d_image(x, n):
        if n < 0 or n >= n_top:
            return None
        return [sum_entries(F, tot.d[n], x, a) for a in range(tot.dims[n + 1])]

    def boundary_gens(r, h, v):
        n = h + v
        gens = [list(x) for x in z_basis(r - 1, h + 1, n)]
        for x in z_basis(r - 1, h - r + 1, n - 1):
            img = d_image(x, n - 1)
            if img is not None:
                gens.append(img)
        return gens

    r_stab = max(H, 1) + 2
    page_dims = {}
    page_reps = {}
    for r in range(1, r_stab + 1):
        for h in range(H + 1):
            for v in range(V + 1):
                z = z_basis(r, h, h + v)
                bnd = boundary_gens(r, h, v)
                bnd_rr = rref(F, bnd)[0] if bnd else []
                current = [list(x) for x in bnd_rr]
                rk = len(current)
                reps = []
                for cand in z:
                    if len(rref(F, current + [cand])[1]) > rk:
                        current.append(cand)
                        rk += 1
                        reps.append(cand)
                page_dims[(r, h, v)] = len(reps)
                page_reps[(r, h, v)] = (reps, bnd_rr)

    def quotient_coords(r, h, v, vec):
        reps, bnd = page_reps[(r, h, v)]
        cols = [list(x) for x in reps] + [list(x) for x in bnd]
        if not cols:
            if any(x != F.zero for x in vec):
                raise CheckFailed("vector misses the quotient span")
            return []
        sol = solve(F, transpose(cols, ncols=len(vec)), vec)
        if sol is None:
            raise CheckFailed("vector misses the quotient span")
        return sol[:len(reps)]

    pages = []
    prev = None
    final_page = None
    for r in range(1, r_stab + 1):
        dims_r = {(h, v): page_dims[(r, h, v)]
                  for h in range(H + 1) for v in range(V + 1)
                  if page_dims[(r, h, v)]}
        page = BigradedPage(r, dims_r)
        matrices = {}
        for (h, v), dim_src in sorted(dims_r.items()):
            th, tv = h + r, v - r + 1
            if not (0 <= th <= H and 0 <= tv <= V) or page_dims[(r, th, tv)] == 0:
                continue
            reps, _ = page_reps[(r, h, v)]
            cols = [quotient_coords(r, th, tv, d_image(x, h + v)) for x in reps]
            mat = transpose(cols, ncols=page_dims[(r, th, tv)])
            if not is_zero_matrix(F, mat):
                matrices[(h, v)] = mat
        diff = DifferentialData(r, 0, matrices, bidegree=(r, 1 - r), field=F)
        if prev is not None:
            turned = turn_page(*prev)
            if turned.dims != dims_r:
                raise CheckFailed("page bookkeeping disagrees with subquotients")
        pages.append((page, diff))
        prev = (page, diff)
        final_page = page
    infinity = final_page.copy(r=final_page.r + 1)
    for n in range(n_top + 1):
        total = sum(infinity.dim((h, n - h)) for h in range(H + 1))
        if total != tot.cohomology(n):
            raise CheckFailed(f"E_infinity total in degree {n} misses H^{n}(Tot)")
    return SpectralSequence(0, "custom", pages, infinity,
                            {"filtration": "by columns", "field": repr(F)})


def from_double_complex(D, levels=None):
    """Inverse Dold-Kan in both directions: a bicosimplicial object whose
    binormalization recovers the double complex."""
    D.validate()
    F = D.field
    H, V = D.extent()
    N = levels if levels is not None else max(H, V) + 1
    h_summands = {n: [(sigma, k) for k in range(0, min(n, H) + 1)
                      for sigma in monotone_surjections(n, k)] for n in range(N + 1)}
    v_summands = {n: [(sigma, l) for l in range(0, min(n, V) + 1)
                      for sigma in monotone_surjections(n, l)] for n in range(N + 1)}
    pair_levels = {}
    for s in range(N + 1):
        for t in range(N + 1):
            pair_levels[(s, t)] = [((sh_, sv_), (k, l))
                                   for sh_, k in h_summands[s]
                                   for sv_, l in v_summands[t]]
    dims = {st: sum(D.dim(*kl) for _, kl in levels_)
            for st, levels_ in pair_levels.items()}

    def structure(src, tgt, theta_values, direction):
        src_levels = pair_levels[src]
        tgt_levels = pair_levels[tgt]
        src_offs = []
        acc = 0
        for _, kl in src_levels:
            src_offs.append(acc)
            acc += D.dim(*kl)
        mat = zeros(dims[tgt], acc if acc else 0, F)
        t_off = 0
        for (sig_h, sig_v), (k, l) in tgt_levels:
            sig = sig_h if direction == "h" else sig_v
            k_or_l = k if direction == "h" else l
            composite = tuple(sig[v] for v in theta_values)
            epi, image = _epi_mono_factor(composite, k_or_l)
            block = None
            if image == tuple(range(k_or_l + 1)):
                block = identity(D.dim(k, l), F)
                lvl_from = (k, l)
            elif image == tuple(range(k_or_l)) and k_or_l >= 1:
                lvl_from = (k - 1, l) if direction == "h" else (k, l - 1)
                block = (D.dh if direction == "h" else D.dv).get(lvl_from, [])
            if block:
                want = (epi, sig_v) if direction == "h" else (sig_h, epi)
                for ((tau_h, tau_v), kl), s_off in zip(src_levels, src_offs):
                    if (tau_h, tau_v) == want and kl == lvl_from:
                        for a in range(len(block)):
                            for b in range(len(block[0]) if block else 0):
                                mat[t_off + a][s_off + b] = block[a][b]
            t_off += D.dim(k, l)
        return mat

    dh, dv, sh, sv = {}, {}, {}, {}
    for s in range(N + 1):
        for t in range(N + 1):
            if s < N:
                dh[(s, t)] = [structure((s, t), (s + 1, t),
                                        tuple(v if v < i else v + 1 for v in range(s + 1)), "h")
                              for i in range(s + 2)]
            if t < N:
                dv[(s, t)] = [structure((s, t), (s, t + 1),
                                        tuple(v if v < i else v + 1 for v in range(t + 1)), "v")
                              for i in range(t + 2)]
            if s >= 1:
                sh[(s, t)] = [structure((s, t), (s - 1, t),
                                        tuple(v if v <= i else v - 1 for v in range(s + 1)), "h")
                              for i in range(s)]
            if t >= 1:
                sv[(s, t)] = [structure((s, t), (s, t - 1),
                                        tuple(v if v <= i else v - 1 for v in range(t + 1)), "v")
                              for i in range(t)]
    return BicosimplicialVectorSpace(F, dims, dh, dv, sh, sv, N).validate()


def eilenberg_zilber_check(B, s_max):
    """Diagonal cohomotopy dims == total cohomology of the binormalization
    in degrees <= s_max."""
    if s_max > B.N - 1:
        raise InputError(f"s_max {s_max} exceeds the trustworthy range of "
                         f"truncation {B.N}")
    diag = diagonal(B)
    diag_complex = conormalize(diag)
    tot, _, _ = total_complex(binormalize(B))
    for s in range(s_max + 1):
        lhs = diag_complex.cohomology(s)
        rhs = tot.cohomology(s) if s <= tot.top() else 0
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# Finite cosimplicial sets (only pi^0 is defined for these).
# ---------------------------------------------------------------------------


@dataclass
class FiniteCosimplicialSet:
    """Truncated finite cosimplicial set: sizes per level, maps as lists."""

    sizes: list
    d: dict  # level -> [function as list], one per coface
    s_: dict

    @property
    def N(self):
        return len(self.sizes) - 1

    def validate(self):
        N = self.N
        for s in range(N):
            if len(self.d.get(s, [])) != s + 2:
                raise InputError(f"level {s} needs {s + 2} cofaces")
            for f in self.d[s]:
                if len(f) != self.sizes[s] or any(not 0 <= x < self.sizes[s + 1] for x in f):
                    raise InputError(f"bad coface at level {s}")
        for s in range(1, N + 1):
            if len(self.s_.get(s, [])) != s:
                raise InputError(f"level {s} needs {s} codegeneracies")
            for f in self.s_[s]:
                if len(f) != self.sizes[s] or any(not 0 <= x < self.sizes[s - 1] for x in f):
                    raise InputError(f"bad codegeneracy at level {s}")
        self._check_identities()
        return self

    def _check_identities(self):
        N = self.N

        def comp(f, g):  # f after g
            return [f[x] for x in g]

        for s in range(N - 1):
            for i in range(s + 2):
                for j in range(i + 1, s + 3):
                    if comp(self.d[s + 1][j], self.d[s][i]) != comp(self.d[s + 1][i], self.d[s][j - 1]):
                        raise InputError(f"coface identity fails at level {s}")
        for s in range(2, N + 1):
            for i in range(s):
                for j in range(i, s - 1):
                    if comp(self.s_[s - 1][j], self.s_[s][i]) != comp(self.s_[s - 1][i], self.s_[s][j + 1]):
                        raise InputError(f"codegeneracy identity fails at level {s}")
        for s in range(N):
            for j in range(s + 1):
                for i in range(s + 2):
                    lhs = comp(self.s_[s + 1][j], self.d[s][i])
                    if i == j or i == j + 1:
                        rhs = list(range(self.sizes[s]))
                    elif i < j:
                        rhs = comp(self.d[s - 1][i], self.s_[s][j - 1])
                    else:
                        rhs = comp(self.d[s - 1][i - 1], self.s_[s][j])
                    if lhs != rhs:
                        raise InputError(f"mixed identity fails at level {s}")


def constant_cosimplicial_set(size, N):
    ident = list(range(size))
    return FiniteCosimplicialSet(
        [size] * (N + 1),
        {s: [ident for _ in range(s + 2)] for s in range(N)},
        {s: [ident for _ in range(s)] for s in range(1, N + 1)}).validate()


def underlying_cosimplicial_set(C):
    """The finite cosimplicial set underlying an F_p cosimplicial space.

    Elements of each level are enumerated as base-p digit tuples.
    """
    F = C.field
    p = F.p
    sizes = [p**d for d in C.dims]

    def as_function(mat, src_dim, tgt_dim):
        out = []
        for code in range(p**src_dim):
            digits = [(code // p**i) % p for i in range(src_dim)]
            image = [sum(mat[a][b] * digits[b] for b in range(src_dim)) % p
                     for a in range(tgt_dim)]
            out.append(sum(x * p**i for i, x in enumerate(image)))
        return out

    d = {s: [as_function(m, C.dims[s], C.dims[s + 1]) for m in C.d[s]]
         for s in range(C.N)}
    s_ = {s: [as_function(m, C.dims[s], C.dims[s - 1]) for m in C.s_[s]]
          for s in range(1, C.N + 1)}
    return FiniteCosimplicialSet(sizes, d, s_).validate()


def pi0_equalizer_set(C):
    """{x at level 0 : d^0 x = d^1 x} for a finite cosimplicial set."""
    d0, d1 = C.d[0][0], C.d[0][1]
    return [x for x in range(C.sizes[0]) if d0[x] == d1[x]]


@dataclass
class FiniteBicosimplicialSet:
    """Finite bicosimplicial set truncated at (N, N), N >= 2."""

    sizes: dict
    fh: dict  # (s, t) -> [coface functions to (s+1, t)]
    fv: dict
    gh: dict  # (s, t) -> [codegeneracy functions to (s-1, t)]
    gv: dict
    N: int = 2

    def row(self, t):
        return FiniteCosimplicialSet(
            [self.sizes[(s, t)] for s in range(self.N + 1)],
            {s: self.fh[(s, t)] for s in range(self.N)},
            {s: self.gh[(s, t)] for s in range(1, self.N + 1)})

    def column(self, s):
        return FiniteCosimplicialSet(
            [self.sizes[(s, t)] for t in range(self.N + 1)],
            {t: self.fv[(s, t)] for t in range(self.N)},
            {t: self.gv[(s, t)] for t in range(1, self.N + 1)})

    def validate(self):
        if self.N < 2:
            raise InputError("need truncation at least (2, 2)")
        for t in range(self.N + 1):
            self.row(t).validate()
        for s in range(self.N + 1):
            self.column(s).validate()

        def comp(f, g):
            return [f[x] for x in g]

        for s in range(self.N + 1):
            for t in range(self.N + 1):
                if s < self.N and t < self.N:
                    for i, h in enumerate(self.fh[(s, t)]):
                        for j, v in enumerate(self.fv[(s, t)]):
                            if comp(self.fv[(s + 1, t)][j], h) != comp(self.fh[(s, t + 1)][i], v):
                                raise InputError(f"fh/fv do not commute at {(s, t)}")
                if s < self.N and t >= 1:
                    for i, h in enumerate(self.fh[(s, t)]):
                        for j, v in enumerate(self.gv[(s, t)]):
                            if comp(self.gv[(s + 1, t)][j], h) != comp(self.fh[(s, t - 1)][i], v):
                                raise InputError(f"fh/gv do not commute at {(s, t)}")
                if s >= 1 and t < self.N:
                    for i, h in enumerate(self.gh[(s, t)]):
                        for j, v in enumerate(self.fv[(s, t)]):
                            if comp(self.fv[(s - 1, t)][j], h) != comp(self.gh[(s, t + 1)][i], v):
                                raise InputError(f"gh/fv do not commute at {(s, t)}")
                if s >= 1 and t >= 1:
                    for i, h in enumerate(self.gh[(s, t)]):
                        for j, v in enumerate(self.gv[(s, t)]):
                            if comp(self.gv[(s - 1, t)][j], h) != comp(self.gh[(s, t - 1)][i], v):
                                raise InputError(f"gh/gv do not commute at {(s, t)}")
        return self


def constant_bicosimplicial_set(size, N=2):
    ident = list(range(size))
    sizes = {(s, t): size for s in range(N + 1) for t in range(N + 1)}
    fh = {(s, t): [ident for _ in range(s + 2)] for s in range(N) for t in range(N + 1)}
    fv = {(s, t): [ident for _ in range(t + 2)] for s in range(N + 1) for t in range(N)}
    gh = {(s, t): [ident for _ in range(s)] for s in range(1, N + 1) for t in range(N + 1)}
    gv = {(s, t): [ident for _ in range(t)] for s in range(N + 1) for t in range(1, N + 1)}
    return FiniteBicosimplicialSet(sizes, fh, fv, gh, gv, N).validate()


def product_bicosimplicial_set(C, D):
    """External product of two finite cosimplicial sets."""
    N = min(C.N, D.N)
    sizes = {}
    fh, fv, gh, gv = {}, {}, {}, {}
    for s in range(N + 1):
        for t in range(N + 1):
            nc, nd = C.sizes[s], D.sizes[t]
            sizes[(s, t)] = nc * nd

            def pair_fn(f, which, nc=nc, nd=nd, nc2=None):
                # elements encoded as i_C * nd + i_D
                out = []
                for code in range(nc * nd):
                    ic, id_ = code // nd, code % nd
                    if which == "C":
                        out.append(f[ic] * nd + id_)
                    else:
                        out.append(ic * nc2 + f[id_])
                return out

            if s < N:
                fh[(s, t)] = [pair_fn(f, "C") for f in C.d[s]]
            if t < N:
                fv[(s, t)] = [pair_fn(f, "D", nc2=D.sizes[t + 1]) for f in D.d[t]]
            if s >= 1:
                gh[(s, t)] = [pair_fn(f, "C") for f in C.s_[s]]
            if t >= 1:
                gv[(s, t)] = [pair_fn(f, "D", nc2=D.sizes[t - 1]) for f in D.s_[t]]
    return FiniteBicosimplicialSet(sizes, fh, fv, gh, gv, N).validate()


def check_pi00_lemma(B):
    """Does the double equalizer match the diagonal equalizer?

    Tests whether {x : d0_h x = d1_h x} cap {x : d0_v x = d1_v x} equals
    {x : d0_h(d0_v x) = d1_h(d1_v x)} at bidegree (0, 0).  Equality always
    holds for a valid bicosimplicial set; a witness would indicate a bug
    and is surfaced, not suppressed.
    """
    B.validate()
    dh0, dh1 = B.fh[(0, 0)][0], B.fh[(0, 0)][1]
    dv0, dv1 = B.fv[(0, 0)][0], B.fv[(0, 0)][1]
    eh0, eh1 = B.fh[(0, 1)][0], B.fh[(0, 1)][1]
    lhs = {x for x in range(B.sizes[(0, 0)])
           if dh0[x] == dh1[x] and dv0[x] == dv1[x]}
    rhs = {x for x in range(B.sizes[(0, 0)])
           if eh0[dv0[x]] == eh1[dv1[x]]}
    if lhs == rhs:
        return True, None
    return False, sorted(lhs.symmetric_difference(rhs))[0]


# ---------------------------------------------------------------------------
# Seeded random instances, via identity-preserving constructors only.
# ---------------------------------------------------------------------------


def random_invertible(field, n, rng):
    mat = identity(n, field)
    for _ in range(2 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = field.of(rng.randint(1, 3))
        for col in range(n):
            mat[i][col] = field.add(mat[i][col], field.mul(c, mat[j][col]))
    return mat


def invert(field, mat):
    n = len(mat)
    aug = [list(row) + [field.one if i == j else field.zero for j in range(n)]
           for i, row in enumerate(mat)]
    rows, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise CheckFailed("matrix not invertible")
    return [row[n:] for row in rows]


def random_cochain_complex(field, rng, max_level=3, max_total_dim=4):
    """Direct sum of elementary pieces (dots and adjacent iso pairs),
    twisted by random basis changes.  Always a valid complex."""
    L = rng.randint(1, max_level)
    pieces = []
    budget = rng.randint(1, max_total_dim)
    while budget > 0:
        if budget >= 2 and rng.random() < 0.5:
            pieces.append(("pair", rng.randint(0, L - 1)))
            budget -= 2
        else:
            pieces.append(("dot", rng.randint(0, L)))
            budget -= 1
    slots = {m: [] for m in range(L + 1)}
    for i, (kind, lvl) in enumerate(pieces):
        if kind == "dot":
            slots[lvl].append((i, "dot"))
        else:
            slots[lvl].append((i, "src"))
            slots[lvl + 1].append((i, "tgt"))
    dims = [len(slots[m]) for m in range(L + 1)]
    d = []
    for lvl in range(L):
        mat = zeros(dims[lvl + 1], dims[lvl], field)
        for i, (kind, pl) in enumerate(pieces):
            if kind == "pair" and pl == lvl:
                row = slots[lvl + 1].index((i, "tgt"))
                col = slots[lvl].index((i, "src"))
                mat[row][col] = field.one
        d.append(mat)
    changes = [random_invertible(field, dims[m], rng) for m in range(L + 1)]
    new_d = []
    for lvl in range(L):
        m = d[lvl]
        if m and m[0] and dims[lvl] and dims[lvl + 1]:
            m = mat_mul(field, changes[lvl + 1],
                        mat_mul(field, m, invert(field, changes[lvl])))
        new_d.append(m)
    return CochainComplex(field, dims, new_d).validate()


def random_double_complex(field, rng, max_extent=2, max_total_dim=4):
    """Direct sum of elementary double-complex pieces (dots, horizontal and
    vertical iso pairs, commuting iso squares), twisted by basis changes."""
    H = rng.randint(1, max_extent)
    V = rng.randint(1, max_extent)
    pieces = []
    budget = rng.randint(1, max_total_dim)
    while budget > 0:
        roll = rng.random()
        if budget >= 4 and roll < 0.25:
            pieces.append(("square", rng.randint(0, H - 1), rng.randint(0, V - 1)))
            budget -= 4
        elif budget >= 2 and roll < 0.55:
            pieces.append(("hpair", rng.randint(0, H - 1), rng.randint(0, V)))
            budget -= 2
        elif budget >= 2 and roll < 0.8:
            pieces.append(("vpair", rng.randint(0, H), rng.randint(0, V - 1)))
            budget -= 2
        else:
            pieces.append(("dot", rng.randint(0, H), rng.randint(0, V)))
            budget -= 1
    slots = {(h, v): [] for h in range(H + 1) for v in range(V + 1)}
    for i, (kind, h, v) in enumerate(pieces):
        if kind == "dot":
            slots[(h, v)].append((i, "00"))
        elif kind == "hpair":
            slots[(h, v)].append((i, "00"))
            slots[(h + 1, v)].append((i, "10"))
        elif kind == "vpair":
            slots[(h, v)].append((i, "00"))
            slots[(h, v + 1)].append((i, "01"))
        else:
            slots[(h, v)].append((i, "00"))
            slots[(h + 1, v)].append((i, "10"))
            slots[(h, v + 1)].append((i, "01"))
            slots[(h + 1, v + 1)].append((i, "11"))
    dims = {hv: len(sl) for hv, sl in slots.items() if sl}
    dh, dv = {}, {}
    for h in range(H + 1):
        for v in range(V + 1):
            src = slots[(h, v)]
            if not src:
                continue
            if h < H and slots[(h + 1, v)]:
                mat = zeros(len(slots[(h + 1, v)]), len(src), field)
                for i, (kind, ph, pv) in enumerate(pieces):
                    if kind in ("hpair", "square") and ph == h and pv == v:
                        mat[slots[(h + 1, v)].index((i, "10"))][src.index((i, "00"))] = field.one
                    if kind == "square" and ph == h and pv == v - 1:
                        mat[slots[(h + 1, v)].index((i, "11"))][src.index((i, "01"))] = field.one
                dh[(h, v)] = mat
            if v < V and slots[(h, v + 1)]:
                mat = zeros(len(slots[(h, v + 1)]), len(src), field)
                for i, (kind, ph, pv) in enumerate(pieces):
                    if kind in ("vpair", "square") and ph == h and pv == v:
                        mat[slots[(h, v + 1)].index((i, "01"))][src.index((i, "00"))] = field.one
                    if kind == "square" and ph == h - 1 and pv == v:
                        mat[slots[(h, v + 1)].index((i, "11"))][src.index((i, "10"))] = field.one
                dv[(h, v)] = mat
    changes = {hv: random_invertible(field, n, rng) for hv, n in dims.items()}

    def twist(table, tgt_of):
        out = {}
        for (h, v), mat in table.items():
            tgt = tgt_of(h, v)
            if mat and mat[0] and tgt in changes and (h, v) in changes:
                mat = mat_mul(field, changes[tgt],
                              mat_mul(field, mat, invert(field, changes[(h, v)])))
            out[(h, v)] = mat
        return out

    return DoubleCochainComplex(field, dims, twist(dh, lambda h, v: (h + 1, v)),
                                twist(dv, lambda h, v: (h, v + 1))).validate()


def random_cosimplicial_vs(field, rng, levels=3, max_total_dim=3):
    """Inverse Dold-Kan image of a random complex, or a constant."""
    if rng.random() < 0.2:
        return constant_cosimplicial(field, rng.randint(0, 2), levels)
    complex_ = random_cochain_complex(field, rng, max_level=max(1, levels - 1),
                                      max_total_dim=max_total_dim)
    return from_cochain_complex(complex_, levels=levels)


def random_bicosimplicial_vs(field, rng, levels=2, max_total_dim=3):
    """External products and double-complex images, all validated."""
    if rng.random() < 0.5:
        return external_product(
            random_cosimplicial_vs(field, rng, levels, max_total_dim=2),
            random_cosimplicial_vs(field, rng, levels, max_total_dim=2))
    return from_double_complex(
        random_double_complex(field, rng, max_extent=max(1, levels - 1),
                              max_total_dim=max_total_dim), levels=levels)


def generated_sub_bicosimplicial_set(B, seeds):
    """The smallest sub-bicosimplicial set containing the given (0,0) seeds.

    Closure under all structure maps equals closure under the coface
    composites out of (0, 0), which is what gets computed.
    """
    members = {st: set() for st in B.sizes}
    members[(0, 0)] = set(seeds)
    frontier = [((0, 0), x) for x in seeds]
    while frontier:
        (s, t), x = frontier.pop()
        moves = []
        if s < B.N:
            moves += [((s + 1, t), f[x]) for f in B.fh[(s, t)]]
        if t < B.N:
            moves += [((s, t + 1), f[x]) for f in B.fv[(s, t)]]
        if s >= 1:
            moves += [((s - 1, t), f[x]) for f in B.gh[(s, t)]]
        if t >= 1:
            moves += [((s, t - 1), f[x]) for f in B.gv[(s, t)]]
        for spot, y in moves:
            if y not in members[spot]:
                members[spot].add(y)
                frontier.append((spot, y))
    renumber = {st: {old: new for new, old in enumerate(sorted(mem))}
                for st, mem in members.items()}
    sizes = {st: len(mem) for st, mem in members.items()}

    def restrict(table, move):
        out = {}
        for (s, t), fns in table.items():
            tgt = move(s, t)
            out[(s, t)] = [[renumber[tgt][f[old]] for old in sorted(members[(s, t)])]
                           for f in fns]
        return out

    return FiniteBicosimplicialSet(
        sizes,
        restrict(B.fh, lambda s, t: (s + 1, t)),
        restrict(B.fv, lambda s, t: (s, t + 1)),
        restrict(B.gh, lambda s, t: (s - 1, t)),
        restrict(B.gv, lambda s, t: (s, t - 1)),
        B.N).validate()


def random_f2_line_complex(rng):
    """A one-dimensional F_2 complex concentrated in level 0 or 1."""
    f2 = PrimeField(2)
    if rng.randint(0, 1) == 0:
        return CochainComplex(f2, [1, 0], [[]]).validate()
    return CochainComplex(f2, [0, 1], [[[]]]).validate()


def underlying_bicosimplicial_set(B):
    """Finite bicosimplicial set underlying an F_p bicosimplicial space."""
    F = B.field
    p = F.p
    sizes = {st: p**d for st, d in B.dims.items()}

    def as_fn(mat, src_dim, tgt_dim):
        out = []
        for code in range(p**src_dim):
            digits = [(code // p**i) % p for i in range(src_dim)]
            image = [sum(mat[a][b] * digits[b] for b in range(src_dim)) % p
                     for a in range(tgt_dim)]
            out.append(sum(x * p**i for i, x in enumerate(image)))
        return out

    def conv(table, tgt_of):
        out = {}
        for (s, t), mats in table.items():
            tgt = tgt_of(s, t)
            out[(s, t)] = [as_fn(m, B.dims[(s, t)], B.dims[tgt]) for m in mats]
        return out

    return FiniteBicosimplicialSet(
        sizes,
        conv(B.dh, lambda s, t: (s + 1, t)),
        conv(B.dv, lambda s, t: (s, t + 1)),
        conv(B.sh, lambda s, t: (s - 1, t)),
        conv(B.sv, lambda s, t: (s, t - 1)),
        B.N).validate()


def linearized_line_set(rng):
    """Underlying set of the Dold-Kan image of a one-dim F_2 complex."""
    return underlying_cosimplicial_set(
        from_cochain_complex(random_f2_line_complex(rng), levels=2))


def random_finite_bicosimplicial_set(rng, size_cap=5):
    """Constants, products, F_2 linearizations, and generated subobjects.

    Retries until every bidegree holds at most size_cap elements.
    """
    for _ in range(50):
        roll = rng.random()
        if roll < 0.2:
            cand = constant_bicosimplicial_set(rng.randint(1, size_cap), 2)
        elif roll < 0.4:
            cand = product_bicosimplicial_set(
                constant_cosimplicial_set(rng.randint(1, 2), 2),
                constant_cosimplicial_set(rng.randint(1, 2), 2))
        elif roll < 0.65:
            cand = product_bicosimplicial_set(
                constant_cosimplicial_set(1, 2), linearized_line_set(rng))
        elif roll < 0.8:
            cand = product_bicosimplicial_set(
                linearized_line_set(rng), constant_cosimplicial_set(1, 2))
        else:
            ambient = product_bicosimplicial_set(
                linearized_line_set(rng), linearized_line_set(rng))
            seeds = [rng.randrange(ambient.sizes[(0, 0)])]
            cand = generated_sub_bicosimplicial_set(ambient, seeds)
        if all(n <= size_cap for n in cand.sizes.values()):
            return cand
    return constant_bicosimplicial_set(1, 2)
