import os

from setuptools import setup

ext_modules = []
if os.environ.get("SYMKAWA_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/symkawa/_polycore.pyx"],
            language_level=3,
            compiler_directives={"boundscheck": False, "wraparound": False},
        )
    except Exception:
        # Pure-Python fallback is selected at import time; the wheel
        # stays fully functional without the compiled core.
        ext_modules = []

setup(ext_modules=ext_modules)
