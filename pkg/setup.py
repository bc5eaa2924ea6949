"""Build script for the optional compiled landscape kernels.

The package works without the extension (a pure numpy/scipy backend is
selected at import time); building it just makes grid scans and minima
refinement faster.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "drivenlmg._kernels._fast",
                ["src/drivenlmg/_kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                libraries=["m"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
