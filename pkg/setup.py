from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [Extension("chiso._qr", ["src/chiso/_qr.pyx"])],
        compiler_directives={"language_level": "3"},
    )
)
