"""Build script: compiles the optional Cython partition kernel.

The package is pure Python except for ``sphecke._qpart``, a compiled
version of the hot partition-count recursion.  If Cython or a C compiler
is unavailable the build falls back to the pure-Python kernel; nothing
else changes.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler: install pure
            print(f"sphecke: skipping compiled kernel ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"sphecke: skipping {ext.name} ({exc}); using pure-Python fallback")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("sphecke._qpart", ["src/sphecke/_qpart.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
