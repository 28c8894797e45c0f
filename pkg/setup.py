"""Build the optional Cython extension for the hot pair-sum kernels.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed extension build is not fatal:

    pip install -e . --no-build-isolation
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fraceig._corecy",
                ["src/fraceig/_corecy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
