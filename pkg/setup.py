# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from setuptools import setup, find_packages
from pathlib import Path

#########
# Setup #
#########

version_file = Path(__file__).parent / 'msgdrop/_version.py'
dd = {}
with open(version_file.absolute(), 'r') as fp:
    exec(fp.read(), dd)
__version__ = dd['__version__']

setup(
    name='msgdrop',
    version=__version__,
    description='Multi-agent deep RL with block-wise message-dropout',
    long_description=("Python package for training communicating agents "
                      "with message-dropout (DCC-MD, MADDPG-MD) and the "
                      "matching baselines on pursuit, cooperative "
                      "navigation and waterworld games.\n\n"
                      "Networks, backpropagation and Adam are written "
                      "directly in numpy."),
    packages=find_packages(exclude=['tests']),
    include_package_data=True,
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.17',
        'scipy',
        'pandas',
        'tqdm',
        ],
    license='Apache 2.0',
    entry_points={
            'console_scripts': ['msgdrop = msgdrop.harness.cli:main'],
        },
    extras_require={
            'tests': ['pytest'],
        },
    )
