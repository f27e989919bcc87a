"""Localization transition of a disordered transverse-field Ising model on
Chimera-cell graphs, with a planar-rotor Monte Carlo emulation of the
reverse-anneal pause-quench protocol."""

__version__ = "0.1.0"
