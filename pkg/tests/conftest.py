import pytest

from kempner.oracle import sieve_primes


@pytest.fixture(scope="session")
def sieve_100k():
    return sieve_primes(10**5)
