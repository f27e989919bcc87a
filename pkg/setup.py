from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps the compiled kernel bit-identical to the
# pure-Python twin (no fused multiply-add in the float expressions).
extensions = [
    Extension(
        "chimeraloc.svmc._kernel",
        ["src/chimeraloc/svmc/_kernel.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
