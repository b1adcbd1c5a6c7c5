from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("specnorm._wht_cython", ["src/specnorm/_wht_cython.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # Pure-python fallback is selected at import time if the extension
    # is missing, so a cython-less build is still functional.
    extensions = []

setup(ext_modules=extensions)
