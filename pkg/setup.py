"""Build hook for the optional compiled scoring kernel.

The package is pure Python; the Cython extension only accelerates the
backoff scoring loop. If Cython or a C++ toolchain is missing, the build
falls through and the package runs on the pure-Python kernel.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that degrades to a pure-Python install on compiler failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or toolchain missing
            sys.stderr.write(
                f"warning: compiled scorer not built ({exc}); "
                "falling back to the pure-Python kernel\n"
            )

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            sys.stderr.write(
                f"warning: building {ext.name} failed ({exc}); "
                "falling back to the pure-Python kernel\n"
            )


import os

ext_modules = []
if os.path.exists("src/classlm/_scorer.pyx"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "classlm._scorer",
                    ["src/classlm/_scorer.pyx"],
                    language="c++",
                    extra_compile_args=["-O2"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
