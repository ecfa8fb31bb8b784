"""Build script for the optional C speedup extension.

The package is pure Python apart from one Cython kernel (levenshtein).
If Cython or a C compiler is unavailable the build falls back to the
pure interpreter implementation; nothing else changes.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if we can, warn and carry on if we cannot."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"warning: C extension build failed ({exc}); "
              "tunegram will use the pure Python kernels")


try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("tunegram._speed", ["src/tunegram/_speed.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
