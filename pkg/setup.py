"""Build script for the optional compiled kernels.

The package works without the extension (a pure-Python fallback is
selected at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the speedups extension, but never fail the install over it."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: building wuglabels._speedups failed ({exc}); "
                  "falling back to pure Python kernels")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print(f"warning: {ext.name} failed to compile ({exc}); "
                  "falling back to pure Python kernels")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "wuglabels._speedups",
                sources=["src/wuglabels/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:  # pragma: no cover - Cython missing entirely
    extensions = []

setup(
    ext_modules=extensions,
    cmdclass={"build_ext": optional_build_ext},
)
