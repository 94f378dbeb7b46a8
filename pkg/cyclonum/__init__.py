"""cyclonum: exact cyclotomic numbers, cyclotomic-integer norms and theorem checks."""

__version__ = "0.1.0"
