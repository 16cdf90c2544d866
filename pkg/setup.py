"""Build script with an optional compiled extension.

The package is fully functional without the extension; finord.kernels falls
back to the pure-Python implementation when the compiled module is absent.
Set FINORD_NO_EXTENSION=1 to skip compilation entirely.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def extensions():
    if os.environ.get("FINORD_NO_EXTENSION") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/finord/_kernels_c.pyx"],
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False},
    )


class OptionalBuildExt(build_ext):
    """Tolerate a failed extension build; the pure fallback takes over."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"warning: compiled kernels skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc})", file=sys.stderr)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
