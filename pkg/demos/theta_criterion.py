"""Two ways to decide whether a polynomial is divisible by theta^alpha mod p.

The direct route divides by theta = x^p y - x y^p repeatedly; the other
route evaluates binomial sums of the coefficients D_i.  Both must agree.
"""
import random

from heckecert.symmetric import d_polynomial, theta_criterion_routes

p, alpha, r = 5, 1, 9

# a hand-picked divisible case: the polynomial is x^3 times theta
routes = theta_criterion_routes({0: 1, 1: -1}, alpha, r, p)
print("D = {0: 1, 1: -1}:", routes)

r = 21  # admissible support is 0 <= i(p-1) <= r - 2 alpha
rng = random.Random(0)
counts = {True: 0, False: 0}
for _ in range(200):
    D = {i: rng.randrange(p) for i in range((r - 2 * alpha) // (p - 1) + 1) if rng.random() < 0.7}
    routes = theta_criterion_routes(D, alpha, r, p)
    assert routes.functional == routes.division
    counts[routes.division] += 1
print(f"200 random D with p={p}, r={r}: {counts[True]} divisible, {counts[False]} not, routes agreed on all")
print("the polynomial for the first case:", d_polynomial({0: 1, 1: -1}, alpha, 9, p))
