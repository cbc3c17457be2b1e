"""Walkthrough: whether a witness generates common inductive knowledge is
fragile under switching tolerances, while common inductive knowledge itself
is not.

Uses the frozen two-agent fixture found by the acceptance search.

Run: python demos/two_agent_witness.py
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from limitknow import OperatorContext, load_frame

with open(os.path.join(os.path.dirname(__file__), "..", "tests", "fixtures", "alice_bob.json")) as fh:
    frame, valuation = load_frame(json.load(fh))

p = valuation["p"]
names = frame.names
print("worlds:", ", ".join(frame.worlds), "   p holds at:", names(p))
for a in frame.agents:
    print(f"{a.name}: tolerance {a.tolerance}, evidence {[names(e) for e in a.basis]}")
print()

ctx = OperatorContext(frame)

# Which witnesses could bob ever have as reason to believe p?
believable = [
    w
    for w in range(frame.universe + 1)
    if ctx.believes_via("bob", w, p)
]
print("witnesses bob can believe p via (anywhere):", [names(w) for w in believable])
witness = believable[0]

print(f"alice believes p via {names(witness)} at:", names(ctx.believes_via("alice", witness, p)))
print(f"bob believes p via {names(witness)} at:  ", names(ctx.believes_via("bob", witness, p)))
print(
    f"worlds where {names(witness)} generates common inductive knowledge of p:",
    names(ctx.generates(witness, p)) or "(none)",
)
print()

# Raise alice's tolerance and the same witness suddenly generates everywhere.
wide = OperatorContext(frame.with_tolerances({"alice": 2}))
print(
    "same question with alice at tolerance 2:",
    wide.frame.names(wide.generates(witness, p)),
)
print()

# Common inductive knowledge itself does not care, as long as both agents are
# genuinely inductive (tolerance above zero).
for na in (1, 2, 3):
    for nb in (1, 2, 3):
        v = OperatorContext(frame.with_tolerances({"alice": na, "bob": nb}))
        assert v.common(p) == p
print("common inductive knowledge of p is", names(ctx.common(p)), "at every tolerance in {1,2,3}^2")

# The witness-existential variant is exactly what a witness can generate, so
# at tolerance 1 it is empty: strictly below common inductive knowledge.
print("witness-existential variant at tolerance 1:", names(ctx.lewis_common(p)) or "(none)")
thresholds = {a.name: ctx.min_tolerance(a.name, p) for a in frame.agents}
print("least tolerances making the common set feasible per agent:", thresholds)
lifted = OperatorContext(frame.with_tolerances(thresholds))
print("after lifting tolerances to those thresholds:", names(lifted.lewis_common(p)))
