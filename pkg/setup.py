"""Builds the optional compiled kernel extension.

The package is fully functional without it: incidence_lab._kernels falls
back to the pure-Python implementations when the extension is missing.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "incidence_lab._fastcore",
                ["src/incidence_lab/_fastcore.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": 3},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
