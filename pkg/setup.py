"""Build script for the optional compiled quadrature core.

The package is fully functional without the extension (a numpy fallback is
selected at import time); building it just makes the n=1 oracle runs faster.
"""

import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "sympcov._speedups",
        ["src/sympcov/_speedups.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
