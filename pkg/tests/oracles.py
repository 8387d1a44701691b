"""Independent oracles for the test suite.

These recompute expected values along routes disjoint from the code under
test: the Bockstein pages come from honest exact-couple lattice arithmetic
(E_r = Z_r / (p Z_{r-1} + p^{1-r} d Z_{r-1}) computed with Smith normal
form over Z), derivation spaces from a literal recursive Leibniz
expansion, and admissible words from brute-force composition filtering.
"""

from fractions import Fraction

from sseqtools.linalg import (QQ, identity, mat_mul_int, mat_vec_int,
                              smith_normal_form, snf_divisors, solve, transpose,
                              zeros)


def p_val(p, m):
    k = 0
    while m and m % p == 0:
        m //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# Bockstein via the exact couple, in lattice form.
# ---------------------------------------------------------------------------


def _columns(mat, n):
    return [[row[j] for row in mat] for j in range(n)] if mat else [[] for _ in range(n)]


def _from_columns(cols, nrows):
    if not cols:
        return [[] for _ in range(nrows)]
    return [[col[i] for col in cols] for i in range(nrows)]


def z_lattice_basis(p, r, boundary, n_cols):
    """Columns spanning {x : boundary @ x = 0 mod p^r}, full rank."""
    if n_cols == 0:
        return []
    if not boundary or not boundary[0]:
        return _columns(identity(n_cols), n_cols)
    d, u, v = smith_normal_form(boundary)
    scales = []
    for i in range(n_cols):
        di = d[i][i] if i < min(len(d), len(d[0])) else 0
        if di == 0:
            scales.append(1)
        else:
            scales.append(p**max(0, r - p_val(p, di)))
    cols = _columns(v, n_cols)
    return [[x * s for x in col] for col, s in zip(cols, scales)]


def coords_in_basis(basis_cols, vec):
    """Integer coordinates of vec in the given lattice basis; asserts
    integrality (i.e. membership)."""
    mat = _from_columns([list(map(Fraction, c)) for c in basis_cols], len(vec))
    sol = solve(QQ, mat, [Fraction(x) for x in vec])
    assert sol is not None, "vector outside the lattice span"
    out = []
    for x in sol:
        assert x.denominator == 1, "vector not in the lattice"
        out.append(int(x))
    return out


def lattice_quotient_p_dim(p, big_basis, small_gens):
    """dim_{F_p} of (lattice spanned by big_basis) / (span of small_gens).

    Requires the quotient to be elementary abelian p (asserted)."""
    n = len(big_basis)
    if n == 0:
        return 0
    coord_cols = [coords_in_basis(big_basis, g) for g in small_gens]
    mat = _from_columns(coord_cols, n)
    divisors = snf_divisors(mat)
    assert len(divisors) == n, "denominator lattice not full rank"
    dim = 0
    for d in divisors:
        assert d in (1, p), f"non-elementary quotient divisor {d}"
        if d == p:
            dim += 1
    return dim


def exact_couple_bockstein(p, complex_, r_max):
    """E_r dims per degree and d_r ranks, straight from the chain level.

    complex_ is a sseqtools ChainComplex; returns (dims, ranks) with
    dims[(r, m)] and ranks[(r, m)] = rank of d_r : degree m+1 -> m.
    """
    ranks_c = complex_.ranks
    degrees = sorted(ranks_c)

    def boundary(m):
        return complex_.boundaries.get(m, [])

    def z_basis(r, m):
        return z_lattice_basis(p, r, boundary(m), ranks_c.get(m, 0))

    def d_image_cols(r, m_src):
        """(1/p^r) boundary applied to Z_r basis of degree m_src."""
        cols = []
        b = boundary(m_src)
        if not b or ranks_c.get(m_src, 0) == 0 or ranks_c.get(m_src - 1, 0) == 0:
            return cols
        for col in z_basis(r, m_src):
            img = mat_vec_int(b, col)
            scaled = []
            for x in img:
                assert x % (p**r) == 0, "boundary not divisible as required"
                scaled.append(x // p**r)
            cols.append(scaled)
        return cols

    def denominator_gens(r, m):
        gens = [[p * x for x in col] for col in z_basis(r - 1, m)]
        b = boundary(m + 1)
        if b and ranks_c.get(m + 1, 0):
            for col in z_basis(r - 1, m + 1):
                img = mat_vec_int(b, col)
                scaled = []
                scale = p**(r - 1)
                for x in img:
                    assert x % scale == 0
                    scaled.append(x // scale)
                gens.append(scaled)
        return gens

    dims = {}
    ranks = {}
    for r in range(1, r_max + 1):
        for m in degrees:
            if ranks_c.get(m, 0) == 0:
                continue
            zb = z_basis(r, m)
            dims[(r, m)] = lattice_quotient_p_dim(p, zb, denominator_gens(r, m))
        for m in degrees:
            if ranks_c.get(m, 0) == 0:
                continue
            if ranks_c.get(m + 1, 0) == 0:
                ranks[(r, m)] = 0
                continue
            den = denominator_gens(r, m)
            image = d_image_cols(r, m + 1)
            if not image:
                ranks[(r, m)] = 0
                continue
            from sseqtools.linalg import mat_mul_int  # local alias
            combined = den + image
            big = lattice_span_basis(combined, ranks_c[m])
            ranks[(r, m)] = lattice_quotient_p_dim(p, big, den)
    return dims, ranks


def lattice_span_basis(gen_cols, n):
    """Basis columns for the span of integer generator columns (full rank)."""
    mat = _from_columns(gen_cols, n)
    d, u, v = smith_normal_form(mat)
    u_inv_cols = []
    # u is unimodular: solve u x = e_i d_i exactly over Q
    for i in range(n):
        di = d[i][i] if i < min(len(d), len(d[0])) else 0
        assert di != 0, "span not full rank"
        rhs = [Fraction(di) if j == i else Fraction(0) for j in range(len(d))]
        sol = solve(QQ, [[Fraction(x) for x in row] for row in u], rhs)
        assert sol is not None
        col = []
        for x in sol:
            assert x.denominator == 1
            col.append(int(x))
        u_inv_cols.append(col)
    return u_inv_cols


# ---------------------------------------------------------------------------
# Presentation complexes for graded abelian groups.
# ---------------------------------------------------------------------------


def presentation_complex(group, rng=None, max_entry=None):
    """A free chain complex whose homology is the given graded group.

    With an rng, random unimodular shears mix the presentation; shears are
    rejected if any entry would exceed max_entry."""
    from sseqtools.specseq import ChainComplex

    degrees = group.degrees()
    ranks = {}
    boundaries = {}
    gens = {}
    for m, size in group.summands:
        gens.setdefault(m, []).append(size)
    top = max(degrees, default=0) + 1
    lo = min(degrees, default=0)
    slot_gen = {}
    slot_rel = {}
    for m in range(lo, top + 1):
        slots = []
        for i, size in enumerate(gens.get(m, [])):
            slot_gen[(m, i)] = len(slots)
            slots.append(("gen", m, i))
        for i, size in enumerate(gens.get(m - 1, [])):
            if size != 0:
                slot_rel[(m - 1, i)] = len(slots)
                slots.append(("rel", m - 1, i))
        ranks[m] = len(slots)
    for m in range(lo + 1, top + 1):
        if ranks.get(m, 0) == 0 or ranks.get(m - 1, 0) == 0:
            continue
        mat = zeros(ranks[m - 1], ranks[m])
        for i, size in enumerate(gens.get(m - 1, [])):
            if size != 0:
                mat[slot_gen[(m - 1, i)]][slot_rel[(m - 1, i)]] = size
        boundaries[m] = mat
    complex_ = ChainComplex({m: r for m, r in ranks.items() if r},
                            boundaries)
    complex_.validate()
    if rng is not None:
        complex_ = shear_complex(complex_, rng, max_entry=max_entry)
    return complex_


def shear_complex(complex_, rng, steps=6, max_entry=None):
    """Random unimodular base changes, preserving the homology."""
    from sseqtools.specseq import ChainComplex

    ranks = dict(complex_.ranks)
    boundaries = {m: [list(r) for r in mat] for m, mat in complex_.boundaries.items()}
    degrees = sorted(ranks)
    for _ in range(steps):
        m = rng.choice(degrees)
        n = ranks[m]
        if n < 2:
            continue
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        # basis change e_i -> e_i + c e_j in C_m: column op on d_m,
        # inverse row op on d_{m+1}
        new_up = None
        new_down = None
        if m in boundaries:
            new_down = [list(r) for r in boundaries[m]]
            for row in new_down:
                row[j] -= c * row[i]
        if m + 1 in boundaries:
            new_up = [list(r) for r in boundaries[m + 1]]
            new_up[i] = [x + c * y for x, y in zip(new_up[i], new_up[j])]
        candidates = [mat for mat in (new_up, new_down) if mat]
        if max_entry is not None and any(
                abs(x) > max_entry for mat in candidates for row in mat for x in row):
            continue
        if new_down is not None:
            boundaries[m] = new_down
        if new_up is not None:
            boundaries[m + 1] = new_up
    out = ChainComplex(ranks, boundaries)
    out.validate()
    return out


def random_graded_group(rng, p, degrees=(1, 8), max_summands=3, ks=(2, 3, 4)):
    """A random group from Z and Z/p^k summands, per the supported class."""
    from sseqtools.specseq import GradedAbelianGroup

    table = {}
    n_summands = rng.randint(1, max_summands)
    for _ in range(n_summands):
        d = rng.randint(*degrees)
        if rng.random() < 0.4:
            table.setdefault(d, []).append(0)
        else:
            table.setdefault(d, []).append(p**rng.choice(ks))
    return GradedAbelianGroup.from_dict(table)


# ---------------------------------------------------------------------------
# Brute-force Leibniz solver for derivations.
# ---------------------------------------------------------------------------


def _mul_monomial_oracle(gens, m1, m2):
    # independent reimplementation of the Koszul product
    out = list(m1)
    sign = 1
    # append m2's letters one at a time, walking them left past m1's tail
    for j, e in enumerate(m2):
        for _ in range(e):
            if gens[j].odd and out[j] >= 1:
                return None
            passed_odd = sum(out[i] for i in range(j + 1, len(gens)) if gens[i].odd)
            if passed_odd % 2:
                sign = -sign
            out[j] += 1
    return sign, tuple(out)


def _poly_mul_oracle(gens, p1, p2):
    out = {}
    for m1, c1 in p1.items():
        for m2, c2 in p2.items():
            r = _mul_monomial_oracle(gens, m1, m2)
            if r is None:
                continue
            sign, m = r
            c = out.get(m, Fraction(0)) + sign * c1 * c2
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def leibniz_expansion(source, letters, d):
    """D(x_{l0} ... x_{lk}) as {generator index: coefficient polynomial}.

    Literal recursion D(a b) = D(a) b + (-1)^{d |a|} a D(b), then each
    D(x_i) coefficient is moved to the left with the Koszul sign.
    """
    gens = source.generators
    nvars = len(gens)

    def unit(i):
        exps = tuple(1 if j == i else 0 for j in range(nvars))
        return {i: {exps[:i] + (0,) + exps[i + 1:]: Fraction(1)}}

    def mono_of(letter):
        return tuple(1 if j == letter else 0 for j in range(nvars))

    def rec(ls):
        if len(ls) == 1:
            return {ls[0]: {tuple(0 for _ in gens): Fraction(1)}}
        head, rest = ls[0], ls[1:]
        rest_deg = sum(gens[l].degree for l in rest)
        out = {}
        # D(head) * rest: move D(head) right past rest
        sign1 = -1 if (rest_deg * (gens[head].degree + d)) % 2 else 1
        rest_poly = {tuple(0 for _ in gens): Fraction(1)}
        for l in rest:
            rest_poly = _poly_mul_oracle(gens, rest_poly, {mono_of(l): Fraction(1)})
        if rest_poly:
            out[head] = {m: sign1 * c for m, c in rest_poly.items()}
        # head * D(rest)
        sign2 = -1 if (d * gens[head].degree) % 2 else 1
        sub = rec(rest)
        for i, poly in sub.items():
            scaled = _poly_mul_oracle(gens, {mono_of(head): Fraction(sign2)}, poly)
            if not scaled:
                continue
            if i in out:
                merged = dict(out[i])
                for m, c in scaled.items():
                    c2 = merged.get(m, Fraction(0)) + c
                    if c2:
                        merged[m] = c2
                    else:
                        merged.pop(m, None)
                if merged:
                    out[i] = merged
                else:
                    del out[i]
            else:
                out[i] = scaled
        return out

    return rec(list(letters))


def leibniz_derivation_dim(source, M, d):
    """Kernel dimension of the relation constraints, via the recursion."""
    from sseqtools.aq import monomial_letters
    from sseqtools.linalg import rank as f_rank

    gens = source.generators
    M.bind(source)
    blocks = [M.dim(g.degree + d) for g in gens]
    total = sum(blocks)
    if total == 0:
        return 0
    rows = []
    for rel in source.relations:
        rd = source.relation_degree(rel)
        out_dim = M.dim(rd + d)
        if out_dim == 0:
            continue
        per_gen = {}
        for mono, c in rel.items():
            if not c:
                continue
            letters = monomial_letters(mono)
            if not letters:
                continue
            for i, poly in leibniz_expansion(source, letters, d).items():
                acc = per_gen.setdefault(i, {})
                for m, cc in poly.items():
                    c2 = acc.get(m, Fraction(0)) + c * cc
                    if c2:
                        acc[m] = c2
                    else:
                        acc.pop(m, None)
        mat = zeros(out_dim, total, QQ)
        off = 0
        for i, g in enumerate(gens):
            if blocks[i] and i in per_gen and per_gen[i]:
                act = M.action_matrix(source, per_gen[i], rd - g.degree,
                                      g.degree + d)
                for a in range(out_dim):
                    for b in range(blocks[i]):
                        mat[a][off + b] = act[a][b]
            off += blocks[i]
        rows.extend(mat)
    return total - (f_rank(QQ, rows) if rows else 0)


# ---------------------------------------------------------------------------
# Brute-force admissible-word enumeration.
# ---------------------------------------------------------------------------


def compositions(d):
    if d == 0:
        yield ()
        return
    for first in range(1, d + 1):
        for rest in compositions(d - first):
            yield (first,) + rest


def admissible_words_by_filter(degree):
    """All p = 2 admissible words of a degree, by exhaustive filtering."""
    return sorted((w for w in compositions(degree)
                   if all(w[i] >= 2 * w[i + 1] for i in range(len(w) - 1))),
                  reverse=True)
