"""Exact equivariant Hirzebruch genera of quasitoric manifolds and rigidity checks."""

__version__ = "0.1.0"
