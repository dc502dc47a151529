"""Build script for the optional compiled kernels.

The package is fully functional without the extension: qperceptron._kernels
falls back to the numpy implementations when the compiled module is missing.
Building is therefore best-effort (Extension(optional=True)), so source
installs succeed on machines without a C compiler or Cython.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "qperceptron._kernels._ckernels",
                ["src/qperceptron/_kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
