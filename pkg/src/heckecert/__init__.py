"""Exact verification toolkit for Hecke-operator computations on symmetric powers.

Modules: ``numbers`` (exact p-adic kernel), ``combinatorics`` and ``identities``
(binomial sums), ``symmetric`` (the modules ``V_r`` and theta-divisibility),
``hecke`` (compact induction and the operator T), ``matrices`` and ``steps``
(witness constants and certificates), ``sweep``/``report``/``cli`` (driver).
"""
__version__ = "0.1.0"
