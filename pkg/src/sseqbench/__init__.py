"""Spectral sequence bookkeeping: Ext over Steenrod subalgebras, chart pages,
maps of spectral sequences, relation chains and periodic-family audits."""

__version__ = "0.1.0"
