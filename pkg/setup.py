"""Build script: compiles the optional search-core extension.

The planner works without the extension (a pure-Python search core is
selected at import time), so a failed compile must not break the install.

    python setup.py build_ext --inplace   # build the extension only
    PRODPLAN_NO_EXT=1 pip install .       # skip the extension entirely
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext
from setuptools.errors import CCompilerError, ExecError, PlatformError


class optional_build_ext(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except (PlatformError, FileNotFoundError) as exc:
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except (CCompilerError, ExecError, PlatformError, ValueError) as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print("*" * 72)
        print("WARNING: could not compile the search-core extension (%s)." % exc)
        print("prodplan will fall back to the pure-Python search core.")
        print("*" * 72)


ext_modules = []
cmdclass = {}
if os.environ.get("PRODPLAN_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "prodplan.planner._speedups",
                    sources=["src/prodplan/planner/_speedups.pyx"],
                    language="c++",
                    extra_compile_args=["-O3", "-std=c++11"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
        cmdclass["build_ext"] = optional_build_ext
    except ImportError:
        print("Cython not available; installing without the compiled search core.")

setup(ext_modules=ext_modules, cmdclass=cmdclass)
