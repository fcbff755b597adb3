import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffp-contract=off: the compiled kernel must round exactly like the pure
# Python fallback (no fused multiply-add), so both backends produce
# bit-identical iterates.
extensions = [
    Extension(
        "sgdavg._kernel_c",
        ["src/sgdavg/_kernel_c.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
