"""Numerics for elliptic polylogarithms: theta/Eisenstein building blocks,
the two-variable elliptic kernel, Debye-type polylogarithm towers, lattice
averages with pole subtraction, the combinatorial coproduct, asymptotic
sector charts, and bar-complex words."""

__version__ = "0.1.0"
