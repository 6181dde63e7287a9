"""Build script: compiles the quadrature hot-kernel extension when Cython is available.

The package is fully functional without the extension; `elaa._kernels`
falls back to the vectorized NumPy implementation at import time.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "elaa._kernels._cy",
                ["src/elaa/_kernels/_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
