"""Numerical constants shared by the package.

Routines take these as keyword defaults so callers can override per call;
nothing here is mutated at runtime.
"""

# Kummer function evaluation
SERIES_SWITCH_ABS_Z = 25.0
MAX_ABS_Z = 100.0
SERIES_MAX_TERMS = 4000
ASYMPTOTIC_MAX_TERMS = 200
ASYMPTOTIC_RTOL = 1e-13
EXTENDED_PRECISION = False
EXTENDED_PRECISION_DPS = 30

POLE_TOL = 1e-12

# SUSY transformation
MAX_ORDER_K = 6
SINGULAR_RTOL = 1e-12
SCAN_RTOL = 1e-10
SCAN_WINDOW = 25
SCAN_MAX_SPACING = 0.01

# P_IV
DEGENERATE_G_TOL = 1e-12

# finite-difference oracles
FD_STEP = 1e-3
FD_STEP_EXTENDED = 1e-8

# ladder checks
ANNIHILATION_TOL = 1e-5
PROPORTIONALITY_TOL = 1e-4
RATIO_MASK_RTOL = 1e-6
