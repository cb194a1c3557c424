from setuptools import setup
from os import path

this_directory = path.abspath(path.dirname(__file__))
with open(path.join(this_directory, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()


setup(
      name='qmix',
      packages=['qmix', 'qmix.models', 'qmix.models.abc'],
      version='0.1.0',
      license='MIT',
      description='Spectral gap, Log-Sobolev and mixing time analysis of '
                  'quantum Markov semigroups',
      long_description=long_description,
      long_description_content_type="text/x-rst",
      author='The qmix authors',
      keywords=['quantum', 'lindblad', 'log-sobolev', 'mixing time', ],
      install_requires=[
            'numpy>=1.20',
            'scipy>=1.7',
      ],
      extras_require={
            'test': ['hypothesis'],
      },
      entry_points={
            'console_scripts': ['qmix=qmix.cli:main'],
      },
      python_requires='>=3.8',
      classifiers=[
                    'Development Status :: 3 - Alpha',
                    'Intended Audience :: Science/Research',
                    'License :: OSI Approved :: MIT License',
                    'Topic :: Scientific/Engineering :: Physics',
                    'Programming Language :: Python :: 3.8',
                    'Programming Language :: Python :: 3.9',
                    'Programming Language :: Python :: 3.10',
                    'Programming Language :: Python :: 3.11',
                    ],
)
