"""Graph inverse semigroups, path groupoids and graph C*-algebra conditions."""

__version__ = "0.1.0"
