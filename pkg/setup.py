from setuptools import setup, find_packages

setup(
    name="de-infeasibility-lab",
    version="1.0.0",
    packages=find_packages(exclude=["checks", "checks.*"]),
    install_requires=[
        "numpy>=1.26",
        "scipy>=1.11",
    ],
    extras_require={
        "test": ["pytest>=8.0.0", "pytest-cov>=5.0.0"],
    },
    entry_points={
        "console_scripts": [
            "de-infeasibility=src.cli:main",
        ],
    },
)
