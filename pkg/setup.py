"""A setuptools based setup module for opminimal

"""
from setuptools import setup, find_packages


def _get_version():
    import json
    import os

    version_file = os.path.join(
        os.path.abspath(os.path.dirname(__file__)),
        'version.json'
    )
    return json.load(open(version_file))['version']



long_description = ("A computer-algebra engine computing Sullivan minimal" +
                    " models of differential graded operads over the" +
                    " rationals, including operads with strict units")


# Requirements for the test environment
test_deps = ["pytest>=6.2", "hypothesis>=6.0"]


setup(
    name='opminimal',
    version=_get_version(),
    description='Sullivan minimal models of unitary dg operads',
    long_description=long_description,
    long_description_content_type='text/markdown',
    tests_require=test_deps,
    extras_require={
                    "test": test_deps
                    },
    python_requires='>=3.8,<4',
    install_requires=[
                      'numpy>=1.16',
                      'pandas>=1.0.3',
                      'sympy>=1.5'
                    ],
    entry_points={
                  'console_scripts': ['opminimal=opminimal.cli:main']
                  },
    keywords='operads, minimal models, A-infinity, homotopy algebra',
    classifiers=[
        'Development Status :: 4 - Beta',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics'
    ],
    packages=find_packages(include=['opminimal', 'opminimal.*'])
)
