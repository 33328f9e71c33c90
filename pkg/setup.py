"""Build script for the compiled kernel extension.

The hot loops of the money-exchange game live in ``entrosim._speedups``
(Cython). The package works without the extension -- ``entrosim.kernels``
falls back to the pure-Python twins at import time -- but the compiled
lane is what makes 10^7-step runs take milliseconds instead of minutes,
so the build is attempted unconditionally.
"""

from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "entrosim._speedups",
                ["src/entrosim/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
)
