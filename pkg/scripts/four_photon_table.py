"""All 16 basis inputs of the 4x4 Bell multiport: success probability and DS/GHZ/W/W' content."""

import itertools

from bellport import InputConfiguration, build_bell_multiport, decompose_general4, postselect, success_probability
from bellport.cli import format_probability

U = build_bell_multiport(4)

print(f"{'input':6}  {'P_suc':>18}  components")
for labels in map("".join, itertools.product("+-", repeat=4)):
    inp = InputConfiguration.from_labels(labels)
    p = success_probability(postselect(U, inp))
    weights = decompose_general4(inp).weights()
    parts = ", ".join(f"{k} {format_probability(v)}" for k, v in weights.items() if v > 0) or "-"
    print(f"{labels:6}  {format_probability(p):>18}  {parts}")
