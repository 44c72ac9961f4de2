"""Build script: compiles the optional block-solver extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here degrades to a pure-Python install
instead of aborting.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "coteach.kernels._block_cy",
                sources=["src/coteach/kernels/_block_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - depends on local toolchain
    sys.stderr.write(
        "coteach: skipping compiled kernel (%s); using pure-Python fallback\n" % exc
    )

setup(ext_modules=ext_modules)
