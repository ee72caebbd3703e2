"""UNSAT certificates and their independent checker."""

import json

from mlss import Certificate, check_certificate, decide, parse
from mlss.certificate import CertNode

f = parse("(x in y | x in z) & x notin y + z")
cert = decide(f, "untyped").certificate
text = cert.dumps()
print("certificate:", len(text), "bytes of JSON, top rule", json.loads(text)["root"]["rule"])

# a reloaded certificate is checked by replaying every step from [f]
print("checks:", bool(check_certificate(f, Certificate.loads(text))))

# tamper with the first step: the checker points at the culprit
root = cert.root
bad = Certificate(f, cert.mode, CertNode("prop.neg-or", root.premises, root.added, root.children))
res = check_certificate(f, bad)
print("tampered:", res.ok, "-", res.reason, "at", res.path or "root")
