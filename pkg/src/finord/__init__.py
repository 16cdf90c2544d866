"""finord: finite order structures and exhaustive verification suites.

Core pieces:

- hsets: hereditarily finite sets over an ordered base, with a strict order
  given by transitive-closure membership.
- hierarchy: the cumulative hierarchy generated by repeatedly adjoining
  nontrivial antichains, plus its verification suites.
- order / maps: finite preorders, monotone and open maps, obstruction
  searches for mediating maps.
- heyting: downset algebras (finite frames) and complete Heyting morphisms.
- kripke: Kripke frames, p-morphisms, coreflection into preorders, and
  finite Boolean algebras with operators.
"""

__version__ = "0.1.0"

from finord.errors import BudgetError, FormatError, FinordError, HypothesisError

__all__ = [
    "__version__",
    "BudgetError",
    "FormatError",
    "FinordError",
    "HypothesisError",
]
