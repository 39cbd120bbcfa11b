"""Exception types shared across the package."""


class DomainError(ValueError):
    """A numeric argument is outside the domain where the formulas are defined."""


class MoleculeError(ValueError):
    """A molecule document or excited-state dataset violates its schema."""
