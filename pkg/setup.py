"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed extension build degrades to a slower install
instead of a broken one.
"""

import sys

from setuptools import setup


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/classmap/kernels/_ckernels.pyx"],
        compiler_directives={"language_level": "3"},
    )


try:
    setup(ext_modules=_extensions())
except SystemExit:
    raise
except Exception as exc:  # compiler missing, etc. -- install pure-Python
    print(f"classmap: extension build failed ({exc}); installing without it",
          file=sys.stderr)
    setup(ext_modules=[])
