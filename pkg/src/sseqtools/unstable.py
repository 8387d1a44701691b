"""Free unstable modules F(n), the periodic Bockstein resolution, and Ext
charts over unstable modules with trivial-action coefficients.

F(n) is the free unstable module on a generator i_n of degree n; its basis
in total degree d consists of the admissible words of degree d - n and
excess at most n, applied to i_n.  The resolution

    ... -b-> F(n+1) -b-> F(n) -b-> F(n-1) --> SQ

sends i_{m+1} to b i_m, so a basis word w i_{m+1} goes to (w . b) i_m with
words of excess above m cut off.  SQ (the desuspended indecomposables of
an Eilenberg-MacLane space) is *defined* as the cokernel of the last map;
that its basis agrees with the classical description (excess <= n-1,
rightmost letter not the Bockstein) is checked, not assumed.
"""

from dataclasses import dataclass

from .errors import CheckFailed, InputError
from .linalg import PrimeField, is_zero_matrix, mat_mul, rank, rref, zeros
from .specseq import BigradedPage, from_single_page
from .steenrod import (admissible_basis, bockstein_right_multiply,
                       ends_in_bockstein, excess, validate_prime)


@dataclass(frozen=True)
class FreeUnstableModule:
    p: int
    n: int

    def basis(self, degree):
        return free_module_basis(self.p, self.n, degree)


@dataclass
class DegreeMatrix:
    """One total degree of a map of free unstable modules.

    entries has len(row_basis) rows and len(col_basis) columns over F_p;
    row_basis spans the target, col_basis the source.
    """

    source: FreeUnstableModule
    target: FreeUnstableModule
    degree: int
    row_basis: list
    col_basis: list
    entries: list


def free_module_basis(p, n, degree):
    """Basis words of F(n) in the given total degree (empty below n)."""
    validate_prime(p)
    if n < 0:
        raise InputError("generator degree must be >= 0")
    if degree < n:
        return []
    return admissible_basis(p, degree - n, max_excess=n)


def beta_resolution_map(p, n, degree):
    """Matrix of F(n+1) -> F(n), i_{n+1} |-> b i_n, in one total degree."""
    validate_prime(p)
    source = FreeUnstableModule(p, n + 1)
    target = FreeUnstableModule(p, n)
    cols = source.basis(degree)
    rows = target.basis(degree)
    index = {w: i for i, w in enumerate(rows)}
    entries = zeros(len(rows), len(cols))
    for j, w in enumerate(cols):
        image = bockstein_right_multiply(p, w)
        for word, coeff in image.terms.items():
            if excess(p, word) > n:
                continue  # zero in F(n)
            entries[index[word]][j] = coeff
    return DegreeMatrix(source, target, degree, rows, cols, entries)


@dataclass
class ResolutionReport:
    p: int
    n: int
    degree_bound: int
    exact: bool
    stages: list  # dicts with degree/stage/module/dim/rank_out/rank_in/exact
    cokernel_dims: dict  # degree -> dim of the stage-0 cokernel

    def to_json(self):
        return {
            "prime": self.p,
            "n": self.n,
            "degree_bound": self.degree_bound,
            "exact": self.exact,
            "stages": self.stages,
            "cokernel_dims": {str(d): v for d, v in sorted(self.cokernel_dims.items())},
        }


def verify_resolution_exactness(p, n, degree_bound):
    """Machine check that the periodic resolution is exact.

    For every total degree d <= degree_bound and stage s >= 1 this checks
    ker = im at F(n-1+s) by rank arithmetic plus vanishing of the
    composite; stage 0 records the cokernel dimensions.
    """
    validate_prime(p)
    if n < 1:
        raise InputError("n must be >= 1")
    if degree_bound < 0:
        raise InputError("degree_bound must be >= 0")
    # a bound below n leaves nothing to check and is vacuously exact
    fp = PrimeField(p)
    stages = []
    coker = {}
    exact = True
    for d in range(n - 1, degree_bound + 1):
        top = max(1, d - n + 2)
        mats = {s: beta_resolution_map(p, n - 2 + s, d) for s in range(1, top + 2)}
        coker[d] = len(mats[1].row_basis) - rank(fp, mats[1].entries)
        for s in range(1, top + 1):
            here, above = mats[s], mats[s + 1]
            dim = len(here.col_basis)
            r_out = rank(fp, here.entries)
            r_in = rank(fp, above.entries)
            composite_zero = True
            if here.entries and above.entries:
                composite_zero = is_zero_matrix(fp, mat_mul(fp, here.entries, above.entries))
            ok = composite_zero and (r_out + r_in == dim)
            exact = exact and ok
            stages.append({
                "degree": d, "stage": s, "module": n - 1 + s, "dim": dim,
                "rank_out": r_out, "rank_in": r_in,
                "composite_zero": composite_zero, "exact": ok,
            })
    return ResolutionReport(p, n, degree_bound, exact, stages, coker)


class QBasisMismatch(CheckFailed):
    """The cokernel basis disagrees with the classical description.

    This should never fire; if it does, both bases are reported and not
    reconciled.
    """

    def __init__(self, p, n, degree, cokernel_words, classical_words):
        self.cokernel_words = cokernel_words
        self.classical_words = classical_words
        super().__init__(
            f"Q-module basis mismatch at p={p}, n={n}, degree={degree}: "
            f"cokernel gives {cokernel_words}, classical description gives "
            f"{classical_words}")


def q_module_basis(p, n, degree):
    """Cokernel basis of F(n) -> F(n-1) in one degree, on i_{n-1} words.

    Computed as the honest cokernel; cross-checked against the classical
    list (excess <= n-1, rightmost letter not the Bockstein).
    """
    validate_prime(p)
    if n < 2:
        raise InputError("q_module_basis needs n >= 2")
    fp = PrimeField(p)
    mat = beta_resolution_map(p, n - 1, degree)
    image_rows = [[row[j] for row in mat.entries] for j in range(len(mat.col_basis))]
    image_rows = [r for r in image_rows if any(r)]
    _, pivots = rref(fp, image_rows)
    cok = [w for i, w in enumerate(mat.row_basis) if i not in pivots]
    classical = [w for w in free_module_basis(p, n - 1, degree)
                 if not ends_in_bockstein(p, w)]
    if cok != classical:
        raise QBasisMismatch(p, n, degree, cok, classical)
    return cok


@dataclass
class TrivialCoefficients:
    """Graded F_p vector space with the trivial Steenrod action."""

    p: int
    dims: dict  # degree -> dimension

    def __post_init__(self):
        self.dims = {int(k): int(v) for k, v in self.dims.items() if int(v)}
        if any(v < 0 for v in self.dims.values()):
            raise InputError("coefficient dimensions must be >= 0")

    def dim(self, degree):
        return self.dims.get(degree, 0)

    def action_matrix(self, word, degree):
        """Matrix of the word acting from degree, for the suspended module.

        Nonempty words act by zero; this is what makes the Hom-complex
        differentials vanish, and it is asserted rather than assumed.
        """
        if not word:
            raise CheckFailed("empty word is not a module operation here")
        target = degree + sum_word_degree(self.p, word)
        return zeros(self.dim(target), self.dim(degree))

    @classmethod
    def from_json(cls, p, doc):
        return cls(p, {int(k): int(v) for k, v in doc.items()})


def sum_word_degree(p, word):
    from .steenrod import word_degree
    return word_degree(p, word)


def ext_chart(p, n, coeffs, s_max, t_max):
    """E^{s,t} = H^s of Hom(F(n-1+s), S^{t-1} M) for trivial-action M.

    The differentials dual to the resolution maps are assembled as honest
    matrices from the expansion of b i_m and the coefficient action; for
    trivial coefficients every one of them is zero, which is asserted
    entrywise before taking cohomology by rank bookkeeping.
    """
    validate_prime(p)
    if n < 1:
        raise InputError("n must be >= 1")
    if s_max < 0 or t_max < 0:
        raise InputError("s_max and t_max must be >= 0")
    if coeffs.p != p:
        raise InputError("coefficient prime does not match")
    fp = PrimeField(p)
    dims = {}
    for t in range(t_max + 1):
        # cochain group at filtration s: Hom(F(n-1+s), S^{t-1}M) = M_{n+s-t}
        cochain = [coeffs.dim(n + s - t) for s in range(s_max + 2)]
        diffs = []
        for s in range(s_max + 1):
            m = n - 1 + s
            generator_image = beta_resolution_map(p, m, m + 1)
            delta = zeros(cochain[s + 1], cochain[s])
            for i, word in enumerate(generator_image.row_basis):
                coeff = generator_image.entries[i][0] if generator_image.col_basis else 0
                if not coeff:
                    continue
                act = coeffs.action_matrix(word, (m) - (t - 1))
                for a in range(len(delta)):
                    for b in range(cochain[s]):
                        delta[a][b] = (delta[a][b] + coeff * act[a][b]) % p
            if not is_zero_matrix(fp, delta):
                raise CheckFailed(
                    "nonzero dual differential with trivial coefficients")
            diffs.append(delta)
        for s in range(s_max + 1):
            r_out = rank(fp, diffs[s]) if diffs[s] else 0
            r_in = rank(fp, diffs[s - 1]) if s >= 1 and diffs[s - 1] else 0
            h = cochain[s] - r_out - r_in
            if h:
                dims[(s, t)] = h
    return BigradedPage(2, dims)


def ext_spectral_sequence(p, n, coeffs, s_max, t_max):
    """ext_chart wrapped as a collapsed spectral sequence for rendering."""
    page = ext_chart(p, n, coeffs, s_max, t_max)
    return from_single_page(page, p, "ext",
                            {"collapse": "E_2 = E_infinity (trivial action)"})
