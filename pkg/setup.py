"""Build script: compiles the cyclic-Jacobi kernel when a toolchain is present.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a failed or skipped build is not fatal.  Set
SEMIFRAME_NO_EXT=1 to skip compilation explicitly.
"""

import os

from setuptools import setup


def ext_modules():
    if os.environ.get("SEMIFRAME_NO_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "semiframes._kernels._jacobi",
        sources=["src/semiframes/_kernels/_jacobi.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=ext_modules())
