"""Centralized test data and constants for the test suite."""


class TestMarkovNumbers:
    """Markov numbers of rigid entry sequences, independent of x₁."""

    VALUES = {
        (0,): 2,
        (1,): 5,
        (2,): 13,
        (3,): 34,
        (1, 1): 29,
        (1, 2): 75,
        (1, 1, 1): 169,
        (1, 2, 1): 433,
    }

    BOUNDS = {
        (1, 1): (13, 34),
    }


class TestGVectors:
    """Closed-form g-vectors of the simples and the Kronecker bands."""

    SIMPLES = {
        1: (-1, 0, 2),
        2: (2, -1, 0),
        3: (0, 2, -1),
    }

    KRONECKER = {
        "a1": (1, -1, 0),
        "b1": (0, 1, -1),
        "g1": (-1, 0, 1),
    }


class TestPsiCodes:
    """Ψ-codes paired with the entries they decode to."""

    DECODED = {
        (1, (1, 1, 1, 2)): (1, 2, 2, 2, 1),
        (1, (3, 5)): (1, 1, 1, 2) * 4 + (1, 1, 1),
        (1, (2, 2)): (1, 1, 2, 1, 1),
    }

    NOT_RIGID = (1, 2, 1, 1, 2, 1)


class TestSnakes:
    """Sign strings and their perfect matching counts."""

    MATCHINGS = {
        ".": 2,
        "+": 3,
        "+-": 5,
        "++": 4,
        "++-": 7,
        "+-+": 8,
        "+++": 5,
    }
