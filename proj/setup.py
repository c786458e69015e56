import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

sources = sorted(
    s for s in glob.glob("src/*.cpp") if not s.endswith(("main.cpp",))
) + ["src/bindings/module.cpp"]

ext = Pybind11Extension(
    "collprob._core",
    sources,
    include_dirs=["include", "vendor", "/usr/include/eigen3"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
