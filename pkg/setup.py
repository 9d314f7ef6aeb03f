"""Build script: compiles the optional extension with the hot kernels.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here degrades the install instead of breaking
it.  Set BARGTOP_NO_EXT=1 to skip the compile step entirely.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def extension_modules():
    if os.environ.get("BARGTOP_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    ext = Extension(
        "bargtop._kernels_c",
        sources=["src/bargtop/_kernels_c.pyx"],
        extra_compile_args=["-O3"],
        libraries=[] if sys.platform == "win32" else ["m"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


class optional_build_ext(build_ext):
    """Allow a pure-python install when no compiler is available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    def _skip(self, exc):
        print(f"warning: compiled kernels skipped ({exc}); "
              "falling back to the pure-python backend", file=sys.stderr)


setup(
    ext_modules=extension_modules(),
    cmdclass={"build_ext": optional_build_ext},
)
