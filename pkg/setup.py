import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SYZMODEL_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:  # pure-Python install
        cythonize = None
    if cythonize is not None:
        import numpy

        ext_modules = cythonize(
            [
                Extension(
                    "syzmodel._kernels",
                    ["src/syzmodel/_kernels.pyx"],
                    language="c++",
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
