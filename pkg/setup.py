import os

from setuptools import setup

# The compiled kernel core is optional: the package falls back to the pure
# numpy kernels when the extension is absent.  Set SLFEM_SKIP_EXT=1 to force
# a pure-Python install.
ext_modules = []
if not os.environ.get("SLFEM_SKIP_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "slfem._kernels._core",
                    ["src/slfem/_kernels/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
