from setuptools import setup, find_packages

setup(
    name='stochastic-conditioning',
    version='0.1.0',
    packages=find_packages(exclude=['tests']),
    description='Inference with stochastic conditioning',
    long_description='Conditioning probabilistic models on observed distributions rather than '
                     'observed values: exact and estimated likelihoods, importance sampling, '
                     'pseudo-marginal MH, SGHMC and black-box variational inference.',
    install_requires=[
        "numpy >= 1.22.0",
        "scipy >= 1.6.0",
        "pandas >= 1.5.0",
        "arviz >= 0.12.0",
    ],
    entry_points={
        'console_scripts': ['stoch-cond=stoch_cond.cli:main'],
    },
    classifiers=[
        'License :: OSI Approved :: MIT License',
    ]
)
