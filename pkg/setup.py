from setuptools import setup

# reading long description from file
with open('README.md', 'r', encoding='utf-8') as file:
    long_description = file.read()

setup(name='uniform_bundles',
      setuptools_git_versioning={
          "enabled": True,
      },
      setup_requires=["setuptools-git-versioning"],
      description='Exact Chern class computations classifying uniform vector bundles on projective space.',
      long_description=long_description,
      long_description_content_type='text/markdown',
      license='MIT',
      packages=['uniform_bundles'],
      package_data={'uniform_bundles': ['data/*.json']},
      entry_points={'console_scripts': ['uniform-bundles=uniform_bundles:main']},
      classifiers=[
          'Intended Audience :: Science/Research',
          'License :: OSI Approved :: MIT License',
          'Programming Language :: Python :: 3',
          'Programming Language :: Python :: 3.10',
          'Topic :: Scientific/Engineering :: Mathematics'
      ],
      python_requires='>=3.10',
      install_requires=['sympy>=1.10'],
      extras_require={'test': ['pytest>=7']},
      keywords='algebraic geometry, vector bundles, chern classes')
