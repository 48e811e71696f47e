"""Fricke characters of free groups: trace normal forms, graded quotients
of the augmentation ideal, and the induced filtration of Aut F_n."""

__version__ = "0.1.0"
