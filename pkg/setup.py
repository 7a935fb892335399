from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("commtile.kernels._ckern", ["src/commtile/kernels/_ckern.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython at build time: the package falls back to the pure-Python
    # kernels selected at import in commtile.kernels.
    ext_modules = []

setup(ext_modules=ext_modules)
