"""Machine-translation support toolkit and desk-scale optimizer laboratory."""

__version__ = "0.1.0"
