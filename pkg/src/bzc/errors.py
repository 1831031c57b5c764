class BzcError(Exception):
    """Base class for every error this package raises on purpose."""


# --- container / bit stream ---

class BadMagic(BzcError):
    pass


class BadVersion(BzcError):
    pass


class BadMode(BzcError):
    pass


class BadProbability(BzcError):
    pass


class PayloadExhausted(BzcError):
    pass


class PayloadSizeMismatch(BzcError):
    pass


# --- combinatorics ---

class WeightMismatch(BzcError):
    pass


class RankOutOfRange(BzcError):
    pass


# --- count code / codec ---

class InvalidModel(BzcError):
    pass


class WeightOutOfRange(BzcError):
    pass


class KOutOfRange(BzcError):
    pass


class NonCanonical(BzcError):
    pass


class LengthMismatch(BzcError):
    pass


# --- graphs ---

class InvalidGraph(BzcError):
    pass


# --- baselines ---

class DegenerateDistribution(BzcError):
    pass


class TooLarge(BzcError):
    pass
