"""Paillier cryptosystem, simplified g = n + 1 variant.

Additively homomorphic: the product of two ciphertexts modulo n^2
decrypts to the sum of their plaintexts.  Key generation accepts a seed
so that runs are reproducible, and tiny keys built from fixed primes are
allowed for exhaustive testing.  gmpy2 speeds up the modular
exponentiation when present; the pure-Python fallback is identical.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

try:
    from gmpy2 import mpz, powmod
except ImportError:  # pragma: no cover - exercised only without gmpy2
    mpz = int

    def powmod(base, exp, mod):
        return pow(base, exp, mod)


# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2,) + _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = int(powmod(a, d, n))
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = int(powmod(x, 2, n))
            if x == n - 1:
                break
        else:
            return False
    return True


def sample_prime(bits: int, rng: random.Random) -> int:
    if bits < 8:
        raise ValueError("prime size below 8 bits is meaningless")
    while True:
        candidate = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if is_probable_prime(candidate):
            return candidate


@dataclass(frozen=True)
class PaillierPublicKey:
    """Modulus n with generator g = n + 1; known to every participant."""

    n: int

    @property
    def g(self) -> int:
        return self.n + 1

    @property
    def nsquare(self) -> int:
        return self.n * self.n

    def encrypt(self, plaintext: int, rng: random.Random) -> int:
        """Randomized encryption of ``plaintext`` in [0, n).

        With g = n + 1 this is ``(1 + m*n) * r^n mod n^2``; ``r`` is drawn
        fresh, so repeated encryptions of one value differ.
        """
        if not 0 <= plaintext < self.n:
            raise ValueError("plaintext out of range [0, n)")
        n = self.n
        nsq = self.nsquare
        r = rng.randrange(1, n)
        while math.gcd(r, n) != 1:  # only relevant for toy moduli
            r = rng.randrange(1, n)
        obfuscator = powmod(mpz(r), n, nsq)
        return int((1 + plaintext * n) * obfuscator % nsq)

    def add(self, c1: int, c2: int) -> int:
        """Homomorphic addition: multiply ciphertexts modulo n^2."""
        nsq = self.nsquare
        for c in (c1, c2):
            if not 0 <= c < nsq:
                raise ValueError("ciphertext out of range [0, n^2)")
        return int(mpz(c1) * c2 % nsq)


@dataclass(frozen=True)
class PaillierKeypair:
    """Public key plus the private (lambda, mu) decryption parameters."""

    public: PaillierPublicKey
    lam: int
    mu: int

    def decrypt(self, ciphertext: int) -> int:
        nsq = self.public.nsquare
        if not 0 <= ciphertext < nsq:
            raise ValueError("ciphertext out of range [0, n^2)")
        n = self.public.n
        x = int(powmod(mpz(ciphertext), self.lam, nsq))
        return (x - 1) // n * self.mu % n


def keypair_from_primes(p: int, q: int) -> PaillierKeypair:
    """Build a keypair from two given primes (toy keys for tests)."""
    if p == q:
        raise ValueError("p and q must differ")
    n = p * q
    phi = (p - 1) * (q - 1)
    # g = n + 1 makes lambda = phi and mu = phi^-1 mod n.
    return PaillierKeypair(PaillierPublicKey(n), lam=phi, mu=pow(phi, -1, n))


def paillier_keygen(bit_length: int = 512, seed: int | None = None) -> PaillierKeypair:
    """Generate a keypair with an n of roughly ``bit_length`` bits.

    Seeded generation is deterministic; without a seed the primes come
    from the system entropy pool.
    """
    if bit_length < 16:
        raise ValueError("bit_length must be >= 16")
    rng = random.Random(seed) if seed is not None else random.SystemRandom()
    half = bit_length // 2
    while True:
        p = sample_prime(half, rng)
        q = sample_prime(bit_length - half, rng)
        if p != q:
            return keypair_from_primes(p, q)
