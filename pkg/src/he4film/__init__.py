"""Quartic nonlinear Schrodinger model of superfluid He-4 films.

Modules
-------
params      physical inputs, coefficient sets, presets and config parsing
dispersion  phonon-roton dispersion law and its tabulated form
elliptic    Jacobi sn/cn/dn and K(k) by the arithmetic-geometric mean
solutions   closed-form traveling waves and their field profiles
verify      residual oracles for the traveling-wave ODEs and the PDE
spectral    split-step Fourier integrator and observables
fields      periodic grids and field states
io          CSV/JSON/checkpoint formats
cli         ``he4film`` command line
"""

__version__ = "0.1.0"
