"""Build script: compiles the optional enumeration kernels.

The compiled module is a speedup only; if the toolchain is missing the
install falls back to the pure-Python kernels (same results, slower).
Set GRIDHIT_NO_EXT=1 to skip the extension entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler etc.
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"WARNING: building gridhit._speedups failed ({exc}); "
              "falling back to the pure-Python kernels")


ext_modules = []
if not os.environ.get("GRIDHIT_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("gridhit._speedups", ["src/gridhit/_speedups.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("WARNING: Cython not available; using pure-Python kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
