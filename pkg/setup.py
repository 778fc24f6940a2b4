import numpy as np
from setuptools import setup

# The compiled kernel is optional: without Cython (or a working compiler)
# the package falls back to the numpy kernel at import time.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/tenantsim/pearray/_core_cy.pyx",
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, include_dirs=[np.get_include()])
