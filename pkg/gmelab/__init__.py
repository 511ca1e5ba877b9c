"""
GMELab - multipartite entanglement certification toolkit

Biseparability, genuine multipartite entanglement and GME-activatability
certificates for small multipartite quantum states.
"""

__version__ = "1.0.0"
__author__ = "GMELab Team"
