"""Walkthrough: the formula language and the executable soundness battery.

Run: python demos/soundness_battery.py
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from limitknow import AgentSpec, Frame, Model, check, evaluate, law_battery, parse, print_formula

frame = Frame(
    ["x", "y", "z"],
    [
        AgentSpec("a", (0b111, 0b110, 0b100), tolerance=1),
        AgentSpec("b", (0b111, 0b011, 0b001), tolerance=2),
    ],
)
model = Model(frame, {"p": 0b101, "q": 0b010})

for text in ("S[a] p -> p", "C p -> S[b] C p", "B[a @ p] p <-> R[a] p & I[a @ p] p"):
    formula = parse(text)
    result = check(model, formula)
    verdict = "valid" if result.valid else f"fails at {', '.join(result.counterexamples)}"
    print(f"{print_formula(formula):<42} {verdict}")

print()
print("extension of 'C p':", frame.names(evaluate(model, parse("C p"))))
print()

report = law_battery(model, trials=30, seed=2026)
width = max(len(r.name) for r in report.results)
for r in report.results:
    status = "ok" if r.ok else f"{len(r.failures)} FAILURES"
    print(f"{r.name:<{width}}  trials={r.trials:<3} informative={r.informative:<3} {status}")
print()
print("battery verdict:", "all laws hold" if report.ok else f"{report.total_failures} failures")
