"""A fourth-step certificate from parameters to recheck.

The witness is a kernel vector u of the integral matrix S, lifted from a
solution z of Q_bar z = e_0 over F_p; the constants C_0..C_alpha are built
from u, and C_-1 is then fixed so that T_0 vanishes exactly.
"""
import json

from heckecert.numbers import val_p
from heckecert.report import dumps
from heckecert.steps import recheck_certificate, run_step

cert = run_step(4, p=11, nu=3, s=7, alpha=1, beta=1, m=2, iota=3)
P = cert.params
print(f"p={P.p} s={P.s} alpha={P.alpha} beta={P.beta} m={P.m} iota={P.iota} -> r={P.r}")
print("witness z (mod p):", cert.witness["z"])
print("witness u:", [str(x) for x in cert.witness["u"]])
for j, c in sorted(cert.constants.items()):
    print(f"  C_{j:<2} has valuation {val_p(c, P.p)}")
print("val_p(T_w):", [val_p(t, P.p) for t in cert.T])
print("passed:", cert.passed)

doc = json.loads(dumps(cert.to_dict()))
print("recheck of the serialized certificate:", recheck_certificate(doc))
doc["witness"]["u"][0] = str(int(doc["witness"]["u"][0]) + 1)
ok, problems = recheck_certificate(doc)
print("after changing u_0:", ok, problems[:2])
