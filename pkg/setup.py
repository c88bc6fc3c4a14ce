"""Package setup."""

from setuptools import find_packages, setup

with open('README.md', 'r') as f:
    LONG_DESCRIPTION = f.read()

with open('requirements.txt') as f:
    DEPENDENCIES = f.readlines()

setup(
    name='renvol',
    version='1.0.0',
    license='MIT',
    python_requires='>=3.8',
    description='Renormalized volume and normalized Ricci-DeTurck flow '
                'of cohomogeneity one asymptotically hyperbolic metrics',
    long_description=LONG_DESCRIPTION,
    long_description_content_type='text/markdown',
    packages=find_packages(),
    classifiers=[
        'Development Status :: 4 - Beta',
        'Programming Language :: Python :: 3',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Typing :: Typed'
    ],
    install_requires=DEPENDENCIES,
    entry_points={'console_scripts': ['renvol=renvol.cli.dispatch:main']},
    include_package_data=True
)
