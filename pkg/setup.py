from setuptools import setup, find_packages

setup(
    name="pyraman",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "matplotlib>=3.10.3",
        "numpy>=2.2.0",
        "pandas>=2.2.3",
        "pytz>=2024.2",
        "scipy>=1.15.0",
        "setuptools>=75.6.0",
    ],
    extras_require={
        "test": ["pytest>=8.0"],
    },
    entry_points={
        "console_scripts": ["pyraman=pyraman.cli:main"],
    },
    description="Simulator and statistics toolkit for a diamond Raman quantum memory",
)
