"""Exception types shared across the package."""


class ChainPairError(Exception):
    """Base class for all chainpair errors."""


class NoSolutionError(ChainPairError):
    """No simplification pair satisfies the distance constraints."""


class RCapInconclusiveError(ChainPairError):
    """The hop-count cap was too small to certify optimality.

    Carries the best value found under the cap (may be the infinity
    sentinel if the final configuration was unreachable within the cap).
    """

    def __init__(self, r_cap, best_found=None):
        self.r_cap = r_cap
        self.best_found = best_found
        msg = f"result not provable under r_cap={r_cap}"
        if best_found is not None:
            msg += f" (best found: {best_found})"
        super().__init__(msg)


class MemoryBudgetError(ChainPairError):
    """A solve would exceed the configured DP cell budget."""


class SizeGuardError(ChainPairError):
    """An exponential-time oracle was called on an oversized input."""


class PdbParseError(ChainPairError):
    """Malformed or unusable PDB input."""


class ChainFormatError(ChainPairError):
    """Malformed chain file (csv/json) or invalid chain data."""
