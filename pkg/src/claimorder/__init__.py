"""Stochastic-order verification for extreme claim amounts with a random
number of claims: exact extreme distributions for Bernoulli-thinned
severities, majorization predicates, order verifiers and theorem audits, and
a seeded Monte Carlo cross-check."""

__version__ = "0.1.0"
