"""Build script: compiles the optional Cython kernel.

The package is fully functional without the extension (a pure-Python
twin is selected at import time), so any compilation failure downgrades
to a warning instead of breaking the install.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            build_ext.run(self)
        except Exception as exc:  # missing compiler, broken toolchain, ...
            self._warn(exc)

    def build_extension(self, ext):
        try:
            build_ext.build_extension(self, ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            "WARNING: the compiled kernel failed to build (%s); "
            "falling back to the pure-Python kernel" % exc,
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("WARNING: Cython not available; building without the compiled kernel",
              file=sys.stderr)
        return []
    return cythonize(
        [Extension("thomstem._kernel_c", ["src/thomstem/_kernel_c.pyx"])],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
