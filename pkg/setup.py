import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

with open('requirements.txt') as f:
    requirements = f.read().splitlines()

setuptools.setup(
    name="polytree-qe",
    use_scm_version=True,
    setup_requires=['setuptools_scm'],
    author="Polytree QE developers",
    description="Query expansion with polytree Bayesian network thesauri learned "
    "from a document collection.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/polytree-qe/polytree-qe",
    packages=setuptools.find_packages(exclude=["tests"]),
    package_data={'polytree_qe': ['data/stoplist.txt']},
    install_requires=requirements,
    extras_require={
        'cli': ['click>=7.1.2']
    },
    entry_points={
        "console_scripts": ["polytree-qe = polytree_qe.cli:main"]
    },
    classifiers=[
        "Programming Language :: Python :: 3.6",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: Implementation :: CPython",
        "License :: OSI Approved :: GNU Affero General Public License v3",
        "Operating System :: OS Independent"
    ],
    license="AGPL-3.0"
)
