import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("PHOTON_BLOCKADE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "photon_blockade._kernels",
                    ["src/photon_blockade/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
