"""Build script for the compiled simplex pivot kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so failures here only cost speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "backhaulopt.lp._kernel",
                ["src/backhaulopt/lp/_kernel.pyx"],
                # -ffp-contract=off keeps the compiled kernel bit-identical to
                # the NumPy fallback (no fused multiply-add in the updates).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
