# !usr/bin/env python
# -*- coding: utf-8 -*-
#
# Licensed under a 3-clause BSD license.

import os
import re
import glob

from setuptools import setup, find_packages


def get_scripts():
    """ Grab all the scripts in the bin directory.  """
    scripts = []
    if os.path.isdir('bin'):
        scripts = [ fname for fname in glob.glob(os.path.join('bin', '*'))
                                if not os.path.basename(fname).endswith('.rst') ]
    return scripts


def get_requirements():
    """ Get the package requirements from the system file. """
    requirements_file = os.path.join(os.path.dirname(__file__), 'requirements.txt')
    return [line.split('#')[0].strip() for line in open(requirements_file)
                        if not line.strip().startswith('#') and line.strip() != '']


def get_version():
    """ Read the version from the package without importing it. """
    init_file = os.path.join(os.path.dirname(__file__), NAME, '__init__.py')
    with open(init_file) as f:
        return re.search(r"__version__\s*=\s*'([^']+)'", f.read()).group(1)


NAME = 'ising_cavity'
# do not use x.x.x-dev.  things complain.  instead use x.x.xdev
VERSION = get_version()
RELEASE = 'dev' not in VERSION

def run_setup(scripts, packages, install_requires):

    setup(name=NAME,
          provides=NAME,
          version=VERSION,
          license='BSD3',
          description='Cavity-method thermodynamics and critical exponents of the Ising model '
                      'on random trees and random graphs',
          long_description=open('README.md').read(),
          long_description_content_type='text/markdown',
          keywords='Ising model, random graphs, cavity method, critical exponents',
          packages=packages,
          package_data={'': ['*.rst', '*.txt']},
          python_requires='>=3.8',
          include_package_data=True,
          scripts=scripts,
          install_requires=install_requires,
          setup_requires=[ 'pytest-runner' ],
          tests_require=[ 'pytest' ],
          classifiers=[
              'Development Status :: 3 - Alpha',
              'Intended Audience :: Science/Research',
              'License :: OSI Approved :: BSD License',
              'Natural Language :: English',
              'Operating System :: OS Independent',
              'Programming Language :: Python',
              'Programming Language :: Python :: 3.8',
              'Topic :: Documentation :: Sphinx',
              'Topic :: Scientific/Engineering :: Physics',
              'Topic :: Scientific/Engineering :: Mathematics',
              'Topic :: Software Development :: Libraries :: Python Modules'
          ])

#-----------------------------------------------------------------------
if __name__ == '__main__':

    # Compile the scripts in the bin/ directory
    scripts = get_scripts()
    # Get the packages to include
    packages = find_packages()
    # Collate the dependencies based on the system text file
    install_requires = get_requirements()
    # Run setup from setuptools
    run_setup(scripts, packages, install_requires)
