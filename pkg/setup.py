import os

from setuptools import setup

# The compiled kernels are optional: the package falls back to the pure-Python
# twin in cpa2relu._kernels_py when the extension is absent.  Set
# CPA2RELU_PURE=1 to skip compilation entirely.
ext_modules = []
if os.environ.get("CPA2RELU_PURE") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/cpa2relu/_kernels.pyx"], language_level=3
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
