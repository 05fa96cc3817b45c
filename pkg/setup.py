"""Build script for the optional compiled search kernel.

The package is pure Python except for repairalloc._kernel._ckernel, a small
Cython module that accelerates the exhaustive sequencing search.  If Cython
or a C compiler is unavailable the build falls back to the pure Python
kernel, which is selected automatically at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "repairalloc._kernel._ckernel",
                ["src/repairalloc/_kernel/_ckernel.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
