"""Build script: compiles the optional C extension holding the hot kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time); set AGREEKIT_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("AGREEKIT_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        extension = Extension(
            "agreekit._ckernels",
            ["src/agreekit/_ckernels.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            optional=True,
        )
        ext_modules = cythonize(
            [extension], compiler_directives={"language_level": "3"}
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
