"""Build the optional compiled GF(p) elimination kernel.

The package works without it: ``forcing.linalg`` falls back to a numpy
implementation when ``forcing._gfp`` cannot be imported.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("FORCING_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "forcing._gfp",
                    ["src/forcing/_gfp.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
