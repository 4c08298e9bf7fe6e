import setuptools

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setuptools.setup(
    name="LieGiambelli",
    version="0.1.0",
    description="Exact characteristic classes of free Lie algebra bundles and Giambelli-type "
                "classes of degeneracy loci of distributions.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "examples", "examples.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires='>=3.9',
    install_requires=[
        "numpy==2.0.2",
        "sympy==1.13.3",
    ],
    extras_require={
        "test": [
            "exceptiongroup==1.3.0",
            "iniconfig==2.1.0",
            "packaging==25.0",
            "pluggy==1.6.0",
            "Pygments==2.19.2",
            "pytest==8.4.1",
            "tomli==2.2.1",
        ],
    },
    entry_points={
        "console_scripts": [
            "liegiambelli=loci.cli:main",
        ],
    },
)
