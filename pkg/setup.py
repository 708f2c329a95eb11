"""Build script: compiles the Monte Carlo path kernel.

The package works without the compiled extension (a NumPy fallback is
selected at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "barrierkit._pathkernel",
                ["src/barrierkit/_pathkernel.pyx"],
                # no FMA contraction: the compiled kernel must round
                # exactly like the NumPy fallback, operation by operation
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level="3",
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
