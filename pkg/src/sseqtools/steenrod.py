"""Mod-p Steenrod algebra arithmetic in the admissible basis.

A word is a tuple of letters.  At p = 2 every letter i >= 1 stands for
Sq^i.  At an odd prime the letter 0 stands for the Bockstein b and a
letter s >= 1 stands for the power operation P^s; admissible words never
carry two consecutive Bocksteins.

Words act on module elements with the rightmost letter applied first, so
"ends in a Bockstein" means the last letter is Sq^1 (p = 2) or b (odd p).
Admissibility means i_j >= 2 i_{j+1} at p = 2 and s_j >= p*s_{j+1} + e_j
at odd p, where e_j is 1 when a Bockstein sits between P^{s_j} and
P^{s_{j+1}}.

>>> admissible_basis(2, 3)
[(3,), (2, 1)]
>>> excess(2, (4, 2, 1))
1
>>> str(adem_normal_form(2, (2, 2)))
'Sq^3 Sq^1'
"""

from functools import lru_cache

from .errors import InputError
from .linalg import is_prime

BOCKSTEIN = 0  # letter encoding of beta at odd primes


def validate_prime(p):
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime")


def validate_word(p, word):
    word = tuple(word)
    if p == 2:
        if any(not isinstance(i, int) or i < 1 for i in word):
            raise InputError(f"p = 2 words need positive letters, got {word}")
    else:
        if any(not isinstance(i, int) or i < 0 for i in word):
            raise InputError(f"odd-p words need letters >= 0, got {word}")
    return word


def letter_degree(p, letter):
    if p == 2:
        return letter
    return 1 if letter == BOCKSTEIN else 2 * letter * (p - 1)


def word_degree(p, word):
    return sum(letter_degree(p, a) for a in word)


def is_admissible(p, word):
    if p == 2:
        return all(word[j] >= 2 * word[j + 1] for j in range(len(word) - 1))
    # no doubled Bocksteins, one optional Bockstein between consecutive P's
    prev_s = None
    eps_after_prev = 0
    seen_bockstein_run = 0
    for a in word:
        if a == BOCKSTEIN:
            seen_bockstein_run += 1
            if seen_bockstein_run > 1:
                return False
            eps_after_prev = 1
        else:
            if prev_s is not None and prev_s < p * a + eps_after_prev:
                return False
            prev_s = a
            eps_after_prev = 0
            seen_bockstein_run = 0
    return True


def excess(p, word):
    """Excess of an admissible word; the empty word has excess 0.

    At p = 2 this is i_1 - (i_2 + ... + i_k).  At odd p it is
    2 s_1 + e_0 minus the degree of the tail following the leading
    b^{e_0} P^{s_1} block; the bare Bockstein has excess 1.
    """
    word = tuple(word)
    if not word:
        return 0
    if p == 2:
        return word[0] - sum(word[1:])
    if word == (BOCKSTEIN,):
        return 1
    eps0 = 1 if word[0] == BOCKSTEIN else 0
    s1 = word[eps0]
    tail = word[eps0 + 1:]
    return 2 * s1 + eps0 - word_degree(p, tail)


def ends_in_bockstein(p, word):
    if not word:
        return False
    return word[-1] == (1 if p == 2 else BOCKSTEIN)


def word_str(p, word):
    if not word:
        return "1"
    if p == 2:
        return " ".join(f"Sq^{i}" for i in word)
    return " ".join("b" if a == BOCKSTEIN else f"P^{a}" for a in word)


def _squares_of_degree(degree, cap):
    # admissible Sq-words of the given degree with first letter <= cap
    if degree == 0:
        return [()]
    out = []
    for i in range(min(cap, degree), 0, -1):
        for tail in _squares_of_degree(degree - i, i // 2):
            out.append((i,) + tail)
    return out


def _odd_chains(p, degree, smax):
    # admissible chains P^{s_1} b^{e_1} ... P^{s_k} b^{e_k} of the given degree
    if degree == 0:
        return [()]
    out = []
    for s in range(min(smax, degree // (2 * (p - 1))), 0, -1):
        rem = degree - 2 * s * (p - 1)
        for eps in (0, 1):
            if rem - eps < 0:
                continue
            for tail in _odd_chains(p, rem - eps, (s - eps) // p):
                out.append((s,) + ((BOCKSTEIN,) if eps else ()) + tail)
    return out


def admissible_basis(p, degree, max_excess=None):
    """All admissible words of the given degree, sorted descending.

    With max_excess set, keeps only words of excess <= max_excess.
    """
    validate_prime(p)
    if degree < 0:
        return []
    if p == 2:
        words = _squares_of_degree(degree, degree)
    else:
        words = []
        for eps0 in (0, 1):
            if degree - eps0 < 0:
                continue
            for chain in _odd_chains(p, degree - eps0, degree):
                words.append(((BOCKSTEIN,) if eps0 else ()) + chain)
    words.sort(reverse=True)
    if max_excess is not None:
        words = [w for w in words if excess(p, w) <= max_excess]
    return words


class SteenrodElement:
    """Finite F_p-linear combination of admissible words of equal degree."""

    __slots__ = ("p", "terms")

    def __init__(self, p, terms=()):
        self.p = p
        self.terms = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for word, coeff in items:
            c = coeff % p
            if c:
                word = tuple(word)
                acc = (self.terms.get(word, 0) + c) % p
                if acc:
                    self.terms[word] = acc
                else:
                    self.terms.pop(word, None)
        degrees = {word_degree(p, w) for w in self.terms}
        if len(degrees) > 1:
            raise InputError(f"inhomogeneous element: degrees {sorted(degrees)}")

    @classmethod
    def zero(cls, p):
        return cls(p)

    @classmethod
    def of_word(cls, p, word, coeff=1):
        return cls(p, [(tuple(word), coeff)])

    def is_zero(self):
        return not self.terms

    def degree(self):
        if not self.terms:
            return None
        return word_degree(self.p, next(iter(self.terms)))

    def __add__(self, other):
        if self.p != other.p:
            raise InputError("mixed primes")
        merged = dict(self.terms)
        for w, c in other.terms.items():
            merged[w] = merged.get(w, 0) + c
        return SteenrodElement(self.p, merged)

    def scale(self, c):
        return SteenrodElement(self.p, {w: k * c for w, k in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, SteenrodElement) and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, reverse=True):
            c = self.terms[w]
            parts.append(word_str(self.p, w) if c == 1 else f"{c} {word_str(self.p, w)}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self} (p={self.p})>"


def _binom2(m, n):
    # C(m, n) mod 2 by Lucas: odd iff the bits of n sit inside those of m
    if n < 0 or m < 0 or n > m:
        return 0
    return 1 if (m & n) == n else 0


@lru_cache(maxsize=None)
def _adem_pair(a, b):
    # expansion of the inadmissible product Sq^a Sq^b (a < 2b) mod 2
    out = []
    for c in range(0, a // 2 + 1):
        if _binom2(b - c - 1, a - 2 * c):
            out.append((a + b - c, c) if c > 0 else (a + b,))
    return tuple(out)


def adem_normal_form(p, word):
    """Expand Sq^{i_1}...Sq^{i_k} in the admissible basis (p = 2 only).

    Accepts arbitrary sequences of positive letters; idempotent on
    admissible input.  General Adem rewriting at odd primes is out of
    scope here.
    """
    validate_prime(p)
    if p != 2:
        raise InputError("Adem normalization is only implemented for p = 2")
    word = validate_word(p, word)
    result = {}
    stack = [word]
    while stack:
        w = stack.pop()
        spot = None
        for j in range(len(w) - 1):
            if w[j] < 2 * w[j + 1]:
                spot = j
                break
        if spot is None:
            result[w] = result.get(w, 0) ^ 1
            if not result[w]:
                del result[w]
            continue
        a, b = w[spot], w[spot + 1]
        for mid in _adem_pair(a, b):
            stack.append(w[:spot] + mid + w[spot + 2:])
    return SteenrodElement(2, {w: 1 for w in result})


def multiply(x, y):
    """Product of two elements in the admissible basis (p = 2 only)."""
    if x.p != y.p:
        raise InputError("mixed primes")
    out = SteenrodElement.zero(x.p)
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            out = out + adem_normal_form(x.p, w1 + w2).scale(c1 * c2)
    return out


def beta_left_multiply(p, word):
    """Normal form of b . w, the Bockstein prepended on the left.

    At p = 2 this is Sq^1 Sq^{2k} = Sq^{2k+1} and Sq^1 Sq^{2k+1} = 0; at
    odd p, b.(b...) = 0 and b.(P^s...) = b P^s ... verbatim.
    """
    validate_prime(p)
    word = validate_word(p, word)
    if p == 2:
        if not word:
            return SteenrodElement.of_word(2, (1,))
        if word[0] % 2 == 1:
            return SteenrodElement.zero(2)
        return SteenrodElement.of_word(2, (word[0] + 1,) + word[1:])
    if word and word[0] == BOCKSTEIN:
        return SteenrodElement.zero(p)
    return SteenrodElement.of_word(p, (BOCKSTEIN,) + word)


def bockstein_right_multiply(p, word):
    """Normal form of w . b, the Bockstein appended on the right.

    This is how the free-module maps i_{n+1} -> b i_n act on basis words.
    """
    validate_prime(p)
    word = validate_word(p, word)
    if p == 2:
        return adem_normal_form(2, word + (1,))
    if ends_in_bockstein(p, word):
        return SteenrodElement.zero(p)
    return SteenrodElement.of_word(p, word + (BOCKSTEIN,))
