"""Builds the covop._core extension straight from the C++ sources, so a
plain `pip install .` needs nothing beyond a C++20 compiler and pybind11."""

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

core_sources = [
    "src/graph.cpp",
    "src/laplacian.cpp",
    "src/eigen.cpp",
    "src/mdp.cpp",
    "src/cover_time.cpp",
    "src/options.cpp",
    "src/env.cpp",
    "src/agent.cpp",
    "src/config.cpp",
    "src/harness.cpp",
]

setup(
    ext_modules=[
        Pybind11Extension(
            "covop._core",
            ["bindings/covop_py.cpp"] + core_sources,
            include_dirs=["include"],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
)
