"""Exact occurrence sets {n : v u^n w is a factor}.

In x = 0 1 2 1^3 2^3 1^9 2^9 ... the block 2 1^n 2 occurs exactly for n = 0
and n = 3^(j+1).  The same query in base 4 gives a different progression,
and the two sets meet only at 0.
"""

from substrata import evaluate, make_spec, occurrence_brute, occurrence_set
from substrata.cobham import intersect_occurrence_sets
from substrata.substitution import Substitution

x = make_spec(Substitution.from_strings({"0": "012", "1": "111", "2": "222"}), "0")
y = make_spec(Substitution.from_strings({"0": "0121", "1": "1111", "2": "2222"}), "0")

sx = occurrence_set(x, "2", "1", "2")
sy = occurrence_set(y, "2", "1", "2")
print("base 3:", sx.text())
print("base 4:", sy.text())
print("agrees with brute force to 500:", evaluate(sx, 500) == occurrence_brute(x, "2", "1", "2", 500))
both = intersect_occurrence_sets(sx, 3, sy, 4)
print("intersection:", both.value.text(), "(complete)" if both.complete else "(within the search box)")
