"""Build script for the optional compiled split-search kernel.

The package is fully functional without the extension: the tree module
falls back to a pure numpy implementation at import time.  The build is
therefore allowed to fail soft (missing compiler, missing Cython).
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def make_extensions():
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "postsift._split_fast",
        ["src/postsift/_split_fast.pyx"],
        include_dirs=[np.get_include()],
        # -ffp-contract=off keeps per-op IEEE semantics so the kernel is
        # bit-compatible with the numpy fallback.
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


class OptionalBuildExt(build_ext):
    """Degrade to the pure-Python install when compilation fails."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            print(f"warning: building postsift._split_fast failed ({exc}); "
                  "falling back to the pure numpy kernel", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: {ext.name} did not compile ({exc}); "
                  "falling back to the pure numpy kernel", file=sys.stderr)


setup(ext_modules=make_extensions(), cmdclass={"build_ext": OptionalBuildExt})
