"""Quadratic residue symbols over F_q[x] and character sums.

The symbol (f/m) is computed by a Jacobi-style Euclidean descent through
the polynomial quadratic reciprocity law

    (A/B) = (B/A) * (-1)^((q-1)/2 * deg A * deg B)      A, B monic coprime.

Reciprocity is stated for monic pairs only, so each non-monic remainder r
is normalized by its leading coefficient lam; the factor split off is the
F_q quadratic character of lam raised to the degree of the current
modulus, because lam is a square mod a prime P iff lam^((|P|-1)/2) = 1 and
(|P|-1)/(q-1) has the parity of deg P.  The brute-force Euler-criterion
oracle that validates this rule lives in the test suite, never here.

Character sums over all monic polynomials of a fixed degree reuse the
complete multiplicativity of chi: a factorization sieve stores one
prime-cofactor link per composite, the symbol is evaluated on primes only,
and a single pass extends it to every monic polynomial.
"""

from __future__ import annotations

import threading

from .errors import ResourceLimitError, UnsupportedDegreeError
from .fqpoly import (
    ENUMERATION_BUDGET,
    FieldSpec,
    Poly,
    _legendre_table,
    _mod,
    _mul,
    _squarefree_tuple,
    divisors,
    get_prime_table,
)


def _symbol(num: tuple, mod: tuple, q: int, leg: tuple[int, ...]) -> int:
    """(num/mod) for a monic modulus, by reciprocity descent."""
    sign = 1
    reciprocity_flips = (q - 1) // 2 & 1  # only q = 3 mod 4 can flip signs
    while True:
        dm = len(mod) - 1
        if dm == 0:
            return sign
        num = _mod(num, mod, q)
        if not num:
            return 0
        lc = num[-1]
        if lc != 1:
            if (dm & 1) and leg[lc] == -1:
                sign = -sign
            inv = pow(lc, q - 2, q)
            num = tuple((c * inv) % q for c in num)
        dn = len(num) - 1
        if dn == 0:
            return sign
        if reciprocity_flips and (dn & 1) and (dm & 1):
            sign = -sign
        num, mod = mod, num


def residue_symbol(f: Poly, modulus: Poly) -> int:
    """The quadratic residue symbol (f/modulus) in {-1, 0, +1}.

    The modulus must be monic and nonzero; the symbol is 0 exactly when a
    prime divides both arguments, and is multiplicative over the prime
    factorization of the modulus.
    """
    f._check(modulus)
    if modulus.is_zero:
        raise ZeroDivisionError("residue symbol needs a nonzero modulus")
    if not modulus.is_monic:
        raise ValueError("residue symbol needs a monic modulus")
    q = f.q
    return _symbol(f.coeffs, modulus.coeffs, q, _legendre_table(q))


def lambda_sum(field: FieldSpec, k: int, table=None) -> int:
    """Sum of the von Mangoldt weight over all monic f of degree k.

    Equals sum over m | k of m * #(primes of degree m); the prime
    polynomial theorem says this is exactly q^k.
    """
    if k < 1:
        raise ValueError(f"degree must be >= 1, got {k}")
    if table is None:
        table = get_prime_table(field, k)
    return sum(m * table.count(m) for m in divisors(k))


# ---------------------------------------------------------------------------
# Factorization sieve shared by all characters over the same field
# ---------------------------------------------------------------------------


class _CharSieve:
    """One prime-cofactor link per monic polynomial of degree <= cap.

    links[m][i] is None when the i-th monic degree-m polynomial is prime,
    else a tuple (a, ia, b, ib) meaning it factors as the degree-a block
    entry ia times the degree-b block entry ib.  Any prime factor works;
    the sieve keeps the first one found, deterministically.
    """

    def __init__(self, q: int, cap: int):
        self.q = q
        self.cap = cap
        self.tuples: list[list[tuple]] = [[(1,)]]
        self.links: list[list] = [[None]]
        self.primes: list[list[int]] = [[]]  # per degree, full-block indices
        for m in range(1, cap + 1):
            block = [self._decode(m, i) for i in range(q**m)]
            self.tuples.append(block)
            links = [None] * len(block)
            for a in range(1, m // 2 + 1):
                for ia in self.primes[a]:
                    p = self.tuples[a][ia]
                    for ib, h in enumerate(self.tuples[m - a]):
                        prod = _mul(p, h, q)
                        idx = self._index(prod)
                        if links[idx] is None:
                            links[idx] = (a, ia, m - a, ib)
            self.links.append(links)
            self.primes.append([i for i, link in enumerate(links) if link is None])

    def _decode(self, degree: int, index: int) -> tuple:
        cs = []
        t = index
        for _ in range(degree):
            cs.append(t % self.q)
            t //= self.q
        cs.append(1)
        return tuple(cs)

    def _index(self, coeffs: tuple) -> int:
        acc = 0
        for c in reversed(coeffs[:-1]):
            acc = acc * self.q + c
        return acc


_SIEVE_LOCK = threading.Lock()
_SIEVES: dict[int, _CharSieve] = {}


def _get_char_sieve(q: int, cap: int) -> _CharSieve:
    with _SIEVE_LOCK:
        sieve = _SIEVES.get(q)
        if sieve is None or sieve.cap < cap:
            sieve = _CharSieve(q, cap)
            _SIEVES[q] = sieve
        return sieve


# ---------------------------------------------------------------------------
# The quadratic character chi_D
# ---------------------------------------------------------------------------


class Character:
    """chi(f) = (D/f) for a monic squarefree D of odd degree d = 2g+1.

    Immutable after construction; the per-prime symbol cache and the
    per-degree value blocks fill once and may be read concurrently.
    """

    def __init__(self, D: Poly):
        if not D.is_monic:
            raise ValueError(f"character modulus must be monic, got {D}")
        if not _squarefree_tuple(D.coeffs, D.q):
            raise ValueError(f"character modulus must be squarefree, got {D}")
        if D.degree % 2 == 0:
            raise UnsupportedDegreeError(
                f"deg D = {D.degree} is even; only odd degrees d = 2g+1 are supported "
                "(the even-degree ensemble is out of scope)"
            )
        self.D = D
        self.field = D.field
        self.d = D.degree
        self.g = (D.degree - 1) // 2
        self._leg = _legendre_table(D.q)
        self._prime_chi: dict[tuple, int] = {}
        self._blocks: list[list[int]] = [[1]]
        self._lock = threading.Lock()

    @property
    def q(self) -> int:
        return self.field.q

    def __repr__(self):
        return f"Character(D={self.D}, q={self.q})"

    def chi(self, f: Poly) -> int:
        """chi(f) for a monic nonzero f."""
        self.D._check(f)
        if f.is_zero:
            raise ValueError("chi is defined on monic nonzero polynomials")
        if not f.is_monic:
            raise ValueError("chi is defined on monic polynomials")
        return _symbol(self.D.coeffs, f.coeffs, self.q, self._leg)

    def _chi_prime(self, coeffs: tuple) -> int:
        val = self._prime_chi.get(coeffs)
        if val is None:
            val = _symbol(self.D.coeffs, coeffs, self.q, self._leg)
            self._prime_chi[coeffs] = val
        return val

    def _ensure_blocks(self, cap: int):
        if len(self._blocks) > cap:
            return
        if self.q**cap > ENUMERATION_BUDGET:
            raise ResourceLimitError(
                f"character block at degree {cap} over F_{self.q} exceeds the budget",
                degree=cap,
            )
        with self._lock:
            if len(self._blocks) > cap:
                return
            sieve = _get_char_sieve(self.q, cap)
            blocks = list(self._blocks)
            for m in range(len(blocks), cap + 1):
                links = sieve.links[m]
                tuples = sieve.tuples[m]
                out = [0] * len(links)
                for i, link in enumerate(links):
                    if link is None:
                        out[i] = self._chi_prime(tuples[i])
                    else:
                        a, ia, b, ib = link
                        out[i] = blocks[a][ia] * blocks[b][ib]
                blocks.append(out)
            self._blocks = blocks

    def chi_block(self, k: int) -> list[int]:
        """chi on every monic polynomial of degree k, in enumeration order."""
        if k < 0:
            raise ValueError(f"degree must be >= 0, got {k}")
        self._ensure_blocks(k)
        return self._blocks[k]

    def coefficient_sum(self, k: int) -> int:
        """Sum of chi over all monic polynomials of degree k (exact integer)."""
        if k == 0:
            return 1
        return sum(self.chi_block(k))

    def twisted_lambda_sum(self, k: int, table=None) -> int:
        """Sum of chi(f) * Lambda(f) over monic f of degree k (exact integer).

        Iterates prime powers P^e with e * deg P = k; chi(P^e) is chi(P)^e.
        """
        if k < 1:
            raise ValueError(f"degree must be >= 1, got {k}")
        if table is None:
            table = get_prime_table(self.field, k)
        total = 0
        for m in divisors(k):
            e = k // m
            for p in table.primes(m):
                val = self._chi_prime(p.coeffs)
                if val == 0:
                    continue
                total += m * (val if e & 1 else 1)
        return total
