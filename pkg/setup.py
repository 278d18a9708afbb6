import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SSEQBENCH_PURE_PYTHON") != "1":
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "sseqbench._gf2_core",
                ["src/sseqbench/_gf2_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
