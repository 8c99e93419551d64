"""Harmonic analysis on SL(3,R)/SO(3) with exact Hecke machinery.

Subpackages cover the diagonal torus and Weyl group (`liecore`), numerical
evaluation of the GL(3) spherical function by several integral formulas
(`spherical`), a Paley-Wiener window pair and its inverse Helgason
transform (`window`, `kernel`), the integral Hecke double-coset algebra
(`hecke`), and brute-force lattice counting feeding the amplified
second-moment estimate (`counting`).
"""

from . import liecore, spherical, window, kernel, hecke, counting

__all__ = ["liecore", "spherical", "window", "kernel", "hecke", "counting"]
__version__ = "0.1.0"
