from os import path
import re

from setuptools import setup, find_packages

here = path.abspath(path.dirname(__file__))


def read(*parts):
    with open(path.join(here, *parts), encoding='utf-8') as f:
        return f.read()


def find_version():
    match = re.search(r"^__version__ = ['\"]([^'\"]*)['\"]",
                      read('opacsyn', '__init__.py'), re.M)
    if not match:
        raise RuntimeError("Unable to find version string.")
    return match.group(1)


def get_long_description():
    """README up to the closing ``=====`` line."""
    readme = read('README.rst')
    return readme[:readme.rindex('=====')]


install_requires = ['numpy>=1.17.0', 'pandas>=1.0.1', 'PyYAML>=5.1',
                    'fuzzywuzzy>=0.17', 'tqdm']

setup(
    name='opacsyn',
    version=find_version(),
    description='Co-synthesis of edit functions and supervisors for opacity '
                'enforcement in discrete-event systems',
    long_description=get_long_description(),
    license='LGPL',
    zip_safe=False,
    classifiers=[
        'Development Status :: 4 - Beta',
        'Operating System :: OS Independent',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering',
        'License :: OSI Approved :: GNU Lesser General Public License v3 (LGPLv3)',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10'
    ],
    python_requires='>=3.8',
    keywords='discrete-event systems supervisory control opacity edit function',
    packages=find_packages(exclude=['docs', 'tests']),
    install_requires=install_requires,
    extras_require={
        'test': ['pytest', 'hypothesis']},
    package_data={
        'opacsyn': ['*.yaml', 'data/*.yaml']},
    entry_points={
        'console_scripts': [
            'opacsyn=opacsyn.run:main',
            'opacsyn-synthesize=opacsyn.run:synthesize_script',
            'opacsyn-verify=opacsyn.run:verify_script',
        ],
    },
)
