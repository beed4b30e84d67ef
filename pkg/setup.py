from pathlib import Path

from setuptools import find_packages, setup


def read_requirements():
    lines = Path(__file__).with_name("requirements.txt").read_text().splitlines()
    return [line.strip() for line in lines if line.strip() and not line.startswith("#")]


setup(
    name="pwgraph",
    version="1.0.0",
    description="Paley-Wiener spaces, uniqueness sets and sampling on finite graphs",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["main", "demo_c100"],
    install_requires=read_requirements(),
    python_requires=">=3.9",
    entry_points={"console_scripts": ["pwgraph=main:main"]},
)
