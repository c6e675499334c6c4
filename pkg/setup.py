"""Build script: compiles the optional fast kernel module when Cython and a
C compiler are available.  The package works without it (numpy fallback is
selected at import time), so the extension failing to build is not fatal.

    python setup.py build_ext --inplace
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/isolab/_kernels.pyx"],
        language_level="3",
        compiler_directives={"boundscheck": False, "wraparound": False},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
