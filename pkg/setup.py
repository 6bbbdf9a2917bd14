"""Builds the optional compiled hashing kernel.

The package is fully functional without the extension: warpgate.kernels
falls back to the pure-Python implementation at import time. Set
WARPGATE_PURE_PYTHON=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("WARPGATE_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "warpgate._hashkernel",
                    ["src/warpgate/_hashkernel.pyx"],
                    extra_compile_args=["-O3"],
                    optional=True,
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
