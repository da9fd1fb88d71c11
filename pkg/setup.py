"""Build the optional compiled grid kernels.

The package works without the extension (pure fallbacks are selected at
import time), so the extension is marked optional and a failed build does
not fail the install.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "minksurf._kernels_cy",
                ["src/minksurf/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
