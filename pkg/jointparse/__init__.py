"""jointparse: joint constituency/dependency parsing over lexicalized trees.
Ensures 'jointparse' is importable in tests and runtime.
"""

__version__ = "0.1.0"
