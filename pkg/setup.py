"""Build script: compiles the optional native kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so any compiler failure downgrades to a warning instead of
aborting the install.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that tolerates a missing or broken C toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: native kernel build failed ({exc}); "
            "falling back to the pure-Python kernels",
            file=sys.stderr,
        )


def _extensions():
    if os.environ.get("SPLITFINDER_NO_NATIVE"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        print(
            "WARNING: Cython unavailable; building without native kernels",
            file=sys.stderr,
        )
        return []
    return cythonize(
        [
            Extension(
                "splitfinder.kernels._native",
                ["src/splitfinder/kernels/_native.pyx"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
