"""Builds the optional compiled assembly kernel; the package works without it."""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "spaceform_rigidity.mesh._assembly",
                ["src/spaceform_rigidity/mesh/_assembly.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
