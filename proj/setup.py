"""Builds the _stratmob extension straight from the C++ sources.

The CMake project remains the primary build for the CLI and the test
suites; this file only compiles the python module so that
`pip install -e . --no-build-isolation` works with plain setuptools.
"""

import glob
import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup


def eigen_include():
    for candidate in ("/usr/include/eigen3", "/usr/local/include/eigen3"):
        if os.path.isdir(candidate):
            return candidate
    raise RuntimeError("Eigen headers not found; install libeigen3-dev")


ext = Pybind11Extension(
    "stratmob._stratmob",
    sorted(glob.glob("src/*.cpp")) + ["bindings/pymodule.cpp"],
    include_dirs=["include", eigen_include()],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
