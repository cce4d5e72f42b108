from codecs import open
from os import path

from setuptools import find_packages, setup

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, "README.md"), encoding="utf-8") as f:
    long_description = f.read()

setup(
    name="PyGTaylor",
    version="0.1.0",
    description="Generalized Taylor expansions, Cauchy kernels and Volterra reduction for linear ODEs",
    long_description=long_description,
    long_description_content_type="text/markdown",
    license="MIT",
    # See https://pypi.python.org/pypi?%3Aaction=list_classifiers
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Environment :: Console",
    ],
    keywords="ODE Taylor Cauchy-kernel adjoint Volterra",
    packages=find_packages(exclude=["contrib", "docs", "tests"]),
    python_requires=">=3.8",
    # List run-time dependencies here.  These will be installed by pip when
    # your project is installed.
    install_requires=["numpy>=1.20", "scipy>=1.7", "pydantic>=2"],
    # $ pip install -e .[test]
    extras_require={
        "test": ["pytest"],
        "docs": ["sphinx"],
    },
    entry_points={
        "console_scripts": [
            "gt=gtaylor:main",
        ],
    },
)
