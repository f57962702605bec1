"""Builds the optional compiled search kernel; the package works without it."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - pure-Python install
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("ppk._kernels", ["src/ppk/_kernels.pyx"], optional=True)],
        language_level=3,
    )

setup(ext_modules=ext_modules)
