"""Build script: compiles the optional quadrature-kernel extension.

The package works without the extension (a pure-Python twin of the kernels
is selected at import time), so a failed compilation only costs speed.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible; fall back to pure Python otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or toolchain missing
            warnings.warn(f"building zml._kernels._core failed ({exc}); "
                          "falling back to the pure-Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); "
                          "falling back to the pure-Python kernels")


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools.extension import Extension

    ext = Extension(
        "zml._kernels._core",
        ["src/zml/_kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
