"""Build script: compiles the optional Cython kernel when Cython is available.

The package is fully functional without the extension; ghzdistill.kernels
falls back to the NumPy reference implementation at import time.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ghzdistill.kernels._fast",
                ["src/ghzdistill/kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
