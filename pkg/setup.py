"""Build script.

The grid-propagation kernel has an optional Cython implementation. If
Cython (and a C compiler) are available the extension is built; otherwise
the package falls back to the numpy kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "sectorwalk.backends._gridprop",
                sources=["src/sectorwalk/backends/_gridprop.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
