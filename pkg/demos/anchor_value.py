"""The smallest first-step certificate, worked by hand and by the library.

For p = 5, s = 4 the default weight is r = s + p(p-1) = 24.  The step-1
constant is T_0 = sum of binom(24, 4i) over 0 < 4i < 24.
"""
import math

from heckecert.combinatorics import bigM
from heckecert.numbers import val_p
from heckecert.steps import run_step

p, s = 5, 4
cert = run_step(1, p=p, nu=2, s=s)
r = cert.params.r
by_hand = sum(math.comb(r, 4 * i) for i in range(1, 6))

print(f"r = {r}")
print(f"bigM(24, 0, 5) = {bigM(r, 0, p)}  (includes i = 0 and i = 6)")
print(f"T_0 by hand    = {by_hand}")
print(f"T_0 from cert  = {cert.T[0]}")
print(f"T_0 mod 125    = {cert.T[0] % 125}, val_5(T_0) = {val_p(cert.T[0], p)}")
print()
for a in cert.assertions:
    print(f"  {'ok ' if a.holds else 'BAD'} {a.name:<18} {a.achieved} {a.relation} {a.required}")
