"""Build the optional Cython core. Everything else lives in pyproject.toml."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("QPFBOUNDS_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools.extension import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "qpfbounds._core",
                    [os.path.join("src", "qpfbounds", "_core.pyx")],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                    libraries=["m"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # no Cython/numpy at build time: ship the pure-Python fallback only
        ext_modules = []

setup(ext_modules=ext_modules)
