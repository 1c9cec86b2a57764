"""
Setup configuration for pgan-poison package.
"""
from setuptools import setup, find_packages

setup(
    name="pgan-poison",
    version="0.1.0",
    description="Generative poisoning attacks with detectability constraints, defenses and evaluation",
    packages=find_packages(include=["src", "src.*"]),
    python_requires=">=3.11",
    install_requires=[
        "click>=8.1.7,<8.2",
        "pydantic>=2.6.0",
        "pydantic-settings>=2.1.0",
        "python-dotenv>=1.0.0",
        "numpy>=1.26,<2.0.0",
        "pandas>=2.1.4",
        "httpx>=0.26.0",
        "tenacity>=8.2.3",
        "tqdm>=4.66.1",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.4",
            "pytest-cov>=4.1.0",
            "hypothesis>=6.98.0",
            "black>=24.1.1",
        ]
    },
    entry_points={
        "console_scripts": [
            "pgan-poison=src.cli.main:cli",
        ],
    },
)
