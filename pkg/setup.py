"""Build the compiled search kernel when Cython and a C++ compiler are present.

Without them the package still installs; ``kclub.maxsat`` then falls back
to the pure-Python kernel.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("KCLUB_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("kclub.maxsat._ckernel", ["src/kclub/maxsat/_ckernel.pyx"],
                       language="c++", extra_compile_args=["-O2", "-std=c++11"])],
            compiler_directives={"language_level": 3, "boundscheck": False,
                                 "wraparound": False, "cdivision": True},
        )

setup(ext_modules=ext_modules)
