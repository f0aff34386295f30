import os

from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to a pure Python
# implementation at import time if the extension is missing.
modules = []
if os.environ.get("MDSREPAIR_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext = Extension(
            "mdsrepair._kernel._fast",
            ["src/mdsrepair/_kernel/_fast.pyx"],
            extra_compile_args=["-O3"],
        )
        modules = cythonize([ext], language_level="3")
    except ImportError:
        modules = []

setup(ext_modules=modules)
