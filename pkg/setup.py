import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("HUNTER_SAXTON_NO_EXT"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "hunter_saxton.kernels._ckernels",
        ["src/hunter_saxton/kernels/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())
