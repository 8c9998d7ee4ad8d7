"""Computer algebra for RO(C2)-graded comodules, cobar Ext and the a-Bockstein spectral sequence."""

__version__ = "0.1.0"
