"""Build script: compiles the optional enumeration kernel.

The package works without the extension (a pure-Python fallback is selected at
import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("qreliab._fastcount", ["src/qreliab/_fastcount.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
