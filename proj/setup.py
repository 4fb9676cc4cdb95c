"""Builds the _stkit extension by compiling the C++ core directly; the CMake
tree remains the primary build for the CLI and tests."""

import glob
import subprocess

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup


def eigen_include_dirs():
    try:
        flags = subprocess.run(
            ["pkg-config", "--cflags-only-I", "eigen3"],
            capture_output=True,
            text=True,
            check=True,
        ).stdout.split()
        return [f[2:] for f in flags if f.startswith("-I")]
    except (OSError, subprocess.CalledProcessError):
        return ["/usr/include/eigen3"]


ParallelCompile("NPY_NUM_BUILD_JOBS", default=4).install()

ext = Pybind11Extension(
    "stkit._stkit",
    sorted(glob.glob("src/*.cpp")) + ["python/bindings.cpp"],
    include_dirs=["include", "vendor"] + eigen_include_dirs(),
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
